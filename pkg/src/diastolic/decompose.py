"""Surface splitting and the cone-off construction.

splitSurface produces a two-domain decomposition along a short cycle; the
cut-open domain is then capped with one simplicial cone per boundary circle.
A vertex where the cut touches its own domain more than once is duplicated,
one copy per passage, so the capped complex is a genuine closed manifold.
The coned result can be disconnected (domains need not be connected); each
connected piece is validated and carried separately with provenance back to
the original surface.
"""

import math
from dataclasses import dataclass

from .errors import NoCutFound, ValidationError
from .spectral import Decomposition, cheeger_bound, fiedler_cut, split_from_order
from .surface import UNIT_TRIANGLE_AREA, SimplicialSurface

C0 = 15.0 * math.sqrt(96.0 * math.pi)


def eq51_bound(surface, dec):
    """Right-hand side of the certified split inequality for this surface."""
    g = surface.topology.genus
    min_area = UNIT_TRIANGLE_AREA * min(len(dec.domain1), len(dec.domain2))
    return C0 * math.sqrt(g + 1.0) * min_area / math.sqrt(surface.area)


def eq51_ok(surface, dec):
    return dec.delta.mass <= eq51_bound(surface, dec) + 1e-9


def single_triangle_split(surface, index=0):
    """The always-available fallback: one triangle against the rest."""
    n = len(surface.triangles)
    if n < 2:
        raise NoCutFound("cannot split a single triangle")
    order = [index] + [t for t in range(n) if t != index]
    return split_from_order(surface, order, 1)


def split_surface(surface, cut_source="spectral", mode="practical",
                  constant=96, seed=42, tol=1e-8):
    """Find a two-domain split along a short separating cycle.

    cut_source "spectral" sweeps the Fiedler vector (balanced splits in
    practical mode, ratio-minimizing in proof-faithful mode); "exhaustive"
    asks the oracle for the true optimum (small N only).  Proof-faithful
    mode requires the returned split to satisfy the certified
    length-vs-area inequality and falls through spectral -> exhaustive ->
    single-triangle until one does.
    """
    if cut_source not in ("spectral", "exhaustive"):
        raise ValidationError("unknown cut source %r" % cut_source)
    if mode not in ("practical", "proof-faithful"):
        raise ValidationError("unknown mode %r" % mode)
    candidates = []
    if cut_source == "exhaustive":
        from .oracle import exact_cheeger
        candidates.append(exact_cheeger(surface)[1])
    else:
        fmode = "balanced" if mode == "practical" else "cheeger"
        try:
            candidates.append(fiedler_cut(surface, mode=fmode, tol=tol, seed=seed))
        except Exception:
            pass
    candidates.append(single_triangle_split(surface))
    if mode == "practical":
        return candidates[0]
    for dec in candidates:
        if eq51_ok(surface, dec):
            return dec
    raise ValidationError(
        "no split satisfies length <= %.6g; best |delta|=%d"
        % (eq51_bound(surface, candidates[0]), candidates[0].delta.mass))


@dataclass(frozen=True)
class ConedComponent:
    """One connected closed piece of a coned-off domain."""

    surface: SimplicialSurface
    cone_apexes: tuple          # new vertex ids, one per boundary circle
    provenance: tuple           # per triangle: ("domain", orig_tri) | ("cone", orig_edge)
    vertex_map: tuple           # per vertex: original vertex id or None for apexes
    boundary_edges: tuple       # original edge ids of delta bordering this piece

    @property
    def domain_triangles(self):
        return tuple(p[1] for p in self.provenance if p[0] == "domain")


@dataclass(frozen=True)
class ConedSurface:
    """Cone-off of one side of a decomposition; possibly several components."""

    origin: object              # the surface the domain was cut from
    components: tuple
    side: int
    delta_length: int

    @property
    def triangle_count(self):
        return sum(len(c.surface.triangles) for c in self.components)

    @property
    def area(self):
        return sum(c.surface.area for c in self.components)


def cone_off(surface, dec, side):
    """Cap the chosen domain of a decomposition into closed surfaces.

    The domain is cut open along the separating cycle (vertices touched by
    several boundary passages are duplicated per passage), its boundary
    circles are traced, and each circle is coned to a fresh apex.  Asserts
    the area bookkeeping and that no component drops below the Euler
    characteristic of the input surface.
    """
    if side not in (1, 2):
        raise ValidationError("side must be 1 or 2")
    domain = dec.domain1 if side == 1 else dec.domain2
    dset = set(domain)
    delta_edges = set(dec.delta.coeffs)

    # cut open: orbit corners of domain triangles around shared interior edges
    corner = {}
    for t in domain:
        for v in surface.triangles[t]:
            corner[(t, v)] = (t, v)

    def find(x):
        while corner[x] != x:
            corner[x] = corner[corner[x]]
            x = corner[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            corner[max(rx, ry)] = min(rx, ry)

    for e, (t1, t2) in enumerate(surface.edge_triangles):
        if t1 in dset and t2 in dset and e not in delta_edges:
            u, w = surface.edges[e]
            union((t1, u), (t2, u))
            union((t1, w), (t2, w))

    labels = {}
    cut_tris = []
    for t in domain:
        tri = []
        for v in surface.triangles[t]:
            r = find((t, v))
            if r not in labels:
                labels[r] = len(labels)
            tri.append(labels[r])
        cut_tris.append(tuple(tri))
    nv = len(labels)
    vmap = [None] * nv
    for (t, v), lab in ((k, labels[find(k)]) for k in list(corner)):
        vmap[lab] = v

    # boundary circles of the cut complex
    side_count = {}
    for tri in cut_tris:
        for j in range(3):
            key = (tri[j], tri[(j + 1) % 3]) if tri[j] < tri[(j + 1) % 3] \
                else (tri[(j + 1) % 3], tri[j])
            side_count[key] = side_count.get(key, 0) + 1
    boundary = [k for k, c in side_count.items() if c == 1]
    if any(c > 2 for c in side_count.values()):
        raise ValidationError("cut-open domain is not edge-manifold")
    bnbr = {}
    for u, w in boundary:
        bnbr.setdefault(u, []).append(w)
        bnbr.setdefault(w, []).append(u)
    if any(len(vs) != 2 for vs in bnbr.values()):
        raise ValidationError("boundary of the cut domain is not a union of circles")
    cycles = []
    unused = set(boundary)
    for u0, w0 in sorted(boundary):
        if (u0, w0) not in unused:
            continue
        cyc = [u0, w0]
        unused.discard((u0, w0))
        while True:
            prev, cur = cyc[-2], cyc[-1]
            a, b = bnbr[cur]
            nxt = b if a == prev else a
            if nxt == cyc[0]:
                key = (cur, nxt) if cur < nxt else (nxt, cur)
                unused.discard(key)
                break
            cyc.append(nxt)
            key = (cur, nxt) if cur < nxt else (nxt, cur)
            unused.discard(key)
        cycles.append(cyc)

    all_tris = list(cut_tris)
    prov = [("domain", t) for t in domain]
    apexes = []
    for cyc in cycles:
        apex = nv
        nv += 1
        vmap.append(None)
        apexes.append(apex)
        for i, u in enumerate(cyc):
            w = cyc[(i + 1) % len(cyc)]
            all_tris.append((u, w, apex))
            prov.append(("cone", surface.edge_id(vmap[u], vmap[w])))

    # split into connected components and validate each
    nbr = {}
    for i, tri in enumerate(all_tris):
        for j in range(3):
            key = frozenset((tri[j], tri[(j + 1) % 3]))
            nbr.setdefault(key, []).append(i)
    adj = [[] for _ in all_tris]
    for lst in nbr.values():
        if len(lst) == 2:
            adj[lst[0]].append(lst[1])
            adj[lst[1]].append(lst[0])
    comp_of = [-1] * len(all_tris)
    ncomp = 0
    for i in range(len(all_tris)):
        if comp_of[i] != -1:
            continue
        stack = [i]
        comp_of[i] = ncomp
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if comp_of[y] == -1:
                    comp_of[y] = ncomp
                    stack.append(y)
        ncomp += 1

    components = []
    for c in range(ncomp):
        tidx = [i for i in range(len(all_tris)) if comp_of[i] == c]
        vids = sorted(set(v for i in tidx for v in all_tris[i]))
        relab = {v: k for k, v in enumerate(vids)}
        tris_c = [tuple(relab[v] for v in all_tris[i]) for i in tidx]
        surf_c = SimplicialSurface(
            tris_c, len(vids), nonorientable_genus=surface.nonorientable_genus)
        prov_c = tuple(prov[i] for i in tidx)
        apex_c = tuple(relab[a] for a in apexes if a in relab)
        vmap_c = tuple(vmap[v] for v in vids)
        bedges = sorted(set(p[1] for p in prov_c if p[0] == "cone"))
        if surf_c.topology.euler_characteristic < surface.topology.euler_characteristic:
            raise ValidationError(
                "coned component drops chi below the input surface")
        components.append(ConedComponent(
            surf_c, apex_c, prov_c, vmap_c, tuple(bedges)))

    cone_count = sum(1 for p in prov if p[0] == "cone")
    if cone_count != dec.delta.mass:
        raise ValidationError(
            "cone triangles %d != boundary length %d" % (cone_count, dec.delta.mass))
    coned = ConedSurface(surface, tuple(components), side, dec.delta.mass)
    want = UNIT_TRIANGLE_AREA * (len(domain) + dec.delta.mass)
    if abs(coned.area - want) > 1e-9:
        raise ValidationError("area bookkeeping off: %.12g vs %.12g" % (coned.area, want))
    return coned


def fewer_triangles_check(surface, m1, m2):
    """True iff both coned sides are strictly smaller than the input."""
    n = len(surface.triangles)
    return m1.triangle_count < n and m2.triangle_count < n


def decomposition_to_json_dict(dec):
    return {
        "domain1": list(dec.domain1),
        "domain2": list(dec.domain2),
        "delta": dec.delta.to_pairs(),
        "ratio": dec.ratio,
        "deltaLength": dec.delta.mass,
    }
