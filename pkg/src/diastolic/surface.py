"""Combinatorial closed surfaces.

A surface is a list of triangles over integer vertex ids.  Validation
enforces the closed-manifold conditions (every edge in exactly two
triangles, every vertex link a single cycle, connected triangle adjacency).
All metric quantities downstream treat every triangle as a unit equilateral,
so the area of a surface is (sqrt(3)/4) * len(triangles).
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import Disconnected, NonManifoldEdge, NonManifoldVertex, ValidationError

UNIT_TRIANGLE_AREA = math.sqrt(3.0) / 4.0


@dataclass(frozen=True)
class TopologySummary:
    euler_characteristic: int
    orientable: bool
    genus: int
    ring: str  # "Z" or "Z2"


class SimplicialSurface:
    """A validated triangulated closed surface.

    Construction computes and caches edge tables, triangle adjacency, the
    orientability flag (with a coherent orientation when one exists) and the
    topology summary.  Instances are immutable by convention.
    """

    def __init__(self, triangles, vertex_count=None, nonorientable_genus="ceil"):
        tris = [tuple(int(v) for v in t) for t in triangles]
        if not tris:
            raise ValidationError("empty triangle list")
        seen = set()
        for t in tris:
            if len(t) != 3:
                raise ValidationError("non-triangle face %r" % (t,))
            if len(set(t)) != 3:
                raise ValidationError("degenerate triangle %r" % (t,))
            if min(t) < 0:
                raise ValidationError("negative vertex id in %r" % (t,))
            key = frozenset(t)
            if key in seen:
                raise ValidationError("duplicate triangle %r" % (t,))
            seen.add(key)
        self.triangles = tuple(tris)

        used = sorted({v for t in tris for v in t})
        n = used[-1] + 1
        if vertex_count is None:
            vertex_count = n
        if vertex_count < n:
            raise ValidationError("vertex count %d below max index %d" % (vertex_count, n - 1))
        if len(used) != vertex_count:
            missing = sorted(set(range(vertex_count)) - set(used))
            raise NonManifoldVertex("isolated vertices %s" % missing[:8])
        self.vertex_count = vertex_count

        self._build_edges()
        self._check_links()
        self._check_connected()
        self._orient()

        chi = self.vertex_count - len(self.edges) + len(self.triangles)
        if self.orientable:
            if chi % 2 != 0:
                raise ValidationError("odd Euler characteristic on orientable surface")
            genus = (2 - chi) // 2
            ring = "Z"
        else:
            if nonorientable_genus == "ceil":
                genus = math.ceil((2 - chi) / 2)
            elif nonorientable_genus == "crosscap":
                genus = 2 - chi
            else:
                raise ValidationError("unknown nonorientable genus mode %r" % nonorientable_genus)
            ring = "Z2"
        if genus < 0:
            raise ValidationError("negative genus (chi=%d)" % chi)
        self.topology = TopologySummary(chi, self.orientable, genus, ring)
        self.nonorientable_genus = nonorientable_genus

    # -- construction helpers -------------------------------------------

    def _build_edges(self):
        edge_tris = {}
        for i, (a, b, c) in enumerate(self.triangles):
            for u, v in ((a, b), (b, c), (c, a)):
                e = (u, v) if u < v else (v, u)
                edge_tris.setdefault(e, []).append(i)
        for e, ts in edge_tris.items():
            if len(ts) != 2:
                raise NonManifoldEdge("edge %r lies in %d triangles" % (e, len(ts)))
        self.edges = tuple(sorted(edge_tris))
        self.edge_index = {e: i for i, e in enumerate(self.edges)}
        self.edge_triangles = tuple(tuple(edge_tris[e]) for e in self.edges)

        tri_edges = []
        tri_neighbors = []
        for i, (a, b, c) in enumerate(self.triangles):
            es = []
            ns = []
            for u, v in ((a, b), (b, c), (c, a)):
                e = self.edge_index[(u, v) if u < v else (v, u)]
                es.append(e)
                t1, t2 = self.edge_triangles[e]
                ns.append(t2 if t1 == i else t1)
            tri_edges.append(tuple(es))
            tri_neighbors.append(tuple(ns))
        self.triangle_edges = tuple(tri_edges)
        self.triangle_neighbors = tuple(tri_neighbors)

    def _check_links(self):
        # Every link vertex has degree exactly 2 once the edge check has
        # passed, so a link is a single cycle iff its graph is connected.
        link = {v: {} for v in range(self.vertex_count)}
        for a, b, c in self.triangles:
            link[a].setdefault(b, []).append(c)
            link[a].setdefault(c, []).append(b)
            link[b].setdefault(a, []).append(c)
            link[b].setdefault(c, []).append(a)
            link[c].setdefault(a, []).append(b)
            link[c].setdefault(b, []).append(a)
        for v, adj in link.items():
            start = next(iter(adj))
            seen = {start}
            stack = [start]
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            if len(seen) != len(adj):
                raise NonManifoldVertex("vertex %d has a disconnected link" % v)

    def _check_connected(self):
        n = len(self.triangles)
        seen = [False] * n
        seen[0] = True
        stack = [0]
        count = 1
        while stack:
            t = stack.pop()
            for u in self.triangle_neighbors[t]:
                if not seen[u]:
                    seen[u] = True
                    count += 1
                    stack.append(u)
        if count != n:
            raise Disconnected("triangle adjacency has %d of %d triangles reachable" % (count, n))

    def _orient(self):
        """Propagate the first triangle's listed order across the dual graph.

        Two triangles sharing edge (u, v) are coherently oriented when the
        edge appears as (u, v) in one boundary and (v, u) in the other.
        """
        n = len(self.triangles)
        orient = [None] * n
        orient[0] = self.triangles[0]
        stack = [0]
        orientable = True
        while stack and orientable:
            t = stack.pop()
            a, b, c = orient[t]
            directed = {(a, b), (b, c), (c, a)}
            for u in self.triangle_neighbors[t]:
                shared = set(self.triangles[t]) & set(self.triangles[u])
                x, y = sorted(shared)
                # u must traverse the shared edge opposite to t
                want = (x, y) if (y, x) in directed else (y, x)
                p, q, r = self.triangles[u]
                cand = None
                for rot in ((p, q, r), (q, r, p), (r, p, q), (p, r, q), (r, q, p), (q, p, r)):
                    if want in ((rot[0], rot[1]), (rot[1], rot[2]), (rot[2], rot[0])):
                        cand = rot
                        break
                if cand is None:
                    raise ValidationError("internal orientation propagation error")
                if orient[u] is None:
                    orient[u] = cand
                    stack.append(u)
                else:
                    have = orient[u]
                    rots = {have, (have[1], have[2], have[0]), (have[2], have[0], have[1])}
                    if cand not in rots:
                        orientable = False
                        break
        self.orientable = orientable
        self.orientations = tuple(orient) if orientable else None

    # -- public interface ------------------------------------------------

    @property
    def area(self):
        return UNIT_TRIANGLE_AREA * len(self.triangles)

    def edge_id(self, u, v):
        return self.edge_index[(u, v) if u < v else (v, u)]

    def triangle_arrays(self):
        """(tri_edges, tri_neighbors, edge_triangles) as int32 numpy arrays."""
        te = np.asarray(self.triangle_edges, dtype=np.int32)
        tn = np.asarray(self.triangle_neighbors, dtype=np.int32)
        et = np.asarray(self.edge_triangles, dtype=np.int32)
        return te, tn, et

    def to_json_dict(self):
        return {"vertices": self.vertex_count, "triangles": [list(t) for t in self.triangles]}

    def __repr__(self):
        t = self.topology
        kind = "orientable" if t.orientable else "nonorientable"
        return "SimplicialSurface(N=%d, V=%d, chi=%d, %s, genus=%d)" % (
            len(self.triangles),
            self.vertex_count,
            t.euler_characteristic,
            kind,
            t.genus,
        )


def build_surface(triangles, vertex_count=None, nonorientable_genus="ceil"):
    """Validate a triangle list and return a SimplicialSurface."""
    return SimplicialSurface(triangles, vertex_count, nonorientable_genus)


def from_json_dict(data, nonorientable_genus="ceil"):
    try:
        tris = data["triangles"]
        n = data.get("vertices")
    except (TypeError, KeyError) as exc:
        raise ValidationError("mesh JSON needs 'triangles' (and optional 'vertices')") from exc
    return build_surface(tris, n, nonorientable_genus)


def subdivide_midpoint(surface):
    """Combinatorial midpoint 4-split of every triangle.

    New vertices are the edge midpoints, numbered V + edge_id.  Quadruples
    the triangle count and preserves the Euler characteristic.
    """
    v0 = surface.vertex_count
    out = []
    for i, (a, b, c) in enumerate(surface.triangles):
        eab, ebc, eca = surface.triangle_edges[i]
        mab, mbc, mca = v0 + eab, v0 + ebc, v0 + eca
        out.extend([(a, mab, mca), (mab, b, mbc), (mca, mbc, c), (mab, mbc, mca)])
    return build_surface(out)
