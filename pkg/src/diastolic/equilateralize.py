"""Turning Euclidean triangle complexes into unit-equilateral surfaces.

The pipeline has three stages: size uniformization (midpoint 4-splits until
all diameters agree within a factor of two, 2:1 balanced across gluings),
hanging-vertex repair (bisection from each hanging midpoint to the opposite
vertex), and the final replacement of every triangle by the unit equilateral
one, certified by per-triangle singular values of the affine comparison map.

Geometry is tracked through side lengths only; subdivision children of a
triangle with sides (a, b, c) are all similar to it with ratio 1/2^level, so
no coordinates are ever needed.  Lattice points on glued edges are keyed by
exact dyadic fractions, which makes cross-gluing identification exact.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    BalanceViolated,
    DegenerateTriangle,
    Disconnected,
    LengthMismatch,
    NonAdmissibleAngles,
    NonManifoldEdge,
    ValidationError,
)
from .surface import UNIT_TRIANGLE_AREA, SimplicialSurface

ANGLE_LO = math.pi / 4.0
ANGLE_HI = 3.0 * math.pi / 7.0


def _heron(a, b, c):
    s = 0.5 * (a + b + c)
    val = s * (s - a) * (s - b) * (s - c)
    return math.sqrt(max(val, 0.0))


def triangle_angles(lengths):
    """Interior angles (at corners 0, 1, 2) from side lengths.

    Side j connects corners j and j+1, so the angle at corner j is spanned
    by sides j and j-1 and faces side j+1.
    """
    out = []
    for j in range(3):
        adj1 = lengths[j]
        adj2 = lengths[(j - 1) % 3]
        opp = lengths[(j + 1) % 3]
        cosv = (adj1 * adj1 + adj2 * adj2 - opp * opp) / (2.0 * adj1 * adj2)
        out.append(math.acos(min(1.0, max(-1.0, cosv))))
    return tuple(out)


def triangle_distortion(lengths, target_side=1.0):
    """Singular values (s1 >= s2) of the affine map onto an equilateral.

    The source triangle is embedded from its side lengths and mapped onto
    the equilateral triangle of the given side; the pair (s1, s2) certifies
    the bilipschitz constant max(s1, 1/s2) of that map.
    """
    a, b, c = float(lengths[0]), float(lengths[1]), float(lengths[2])
    x = (a * a + c * c - b * b) / (2.0 * a)
    y2 = c * c - x * x
    if y2 <= 0.0:
        raise DegenerateTriangle("flat triangle with sides (%g, %g, %g)" % (a, b, c))
    src = np.array([[a, x], [0.0, math.sqrt(y2)]])
    t = float(target_side)
    dst = np.array([[t, 0.5 * t], [0.0, 0.5 * math.sqrt(3.0) * t]])
    m = dst @ np.linalg.inv(src)
    s = np.linalg.svd(m, compute_uv=False)
    s1, s2 = float(s[0]), float(s[1])
    if s2 <= 1e-12:
        raise DegenerateTriangle("singular comparison map, sigma2=%.3e" % s2)
    return s1, s2


@dataclass(frozen=True)
class DistortionReport:
    """Bilipschitz certificate for the equilateralization of one surface."""

    per_triangle: tuple
    global_k: float
    stage_bounds: tuple
    area_ratio: float
    scale: float
    scaled_global_k: float

    def to_json_dict(self):
        return {
            "perTriangleBilipschitz": list(self.per_triangle),
            "globalK": self.global_k,
            "stageBounds": list(self.stage_bounds),
            "areaRatio": self.area_ratio,
            "scale": self.scale,
            "scaledGlobalK": self.scaled_global_k,
        }


class GeometricSurface:
    """Euclidean triangle complex with side lengths and edge gluing.

    Triangles are triples of global vertex ids; ``lengths[i][j]`` is the
    length of the side from corner j to corner j+1 of triangle i.  The
    complex may have boundary (unglued sides); gluing is implicit in the
    vertex ids since a repeated vertex pair marks a shared edge.
    """

    def __init__(self, triangles, lengths, vertex_count=None, hanging=()):
        self.triangles = tuple(tuple(int(v) for v in t) for t in triangles)
        self.lengths = tuple(tuple(float(x) for x in L) for L in lengths)
        self.hanging = tuple(hanging)
        if not self.triangles:
            raise ValidationError("empty triangle list")
        if len(self.triangles) != len(self.lengths):
            raise ValidationError("triangles and lengths disagree in count")
        seen = max(max(t) for t in self.triangles) + 1
        if vertex_count is None:
            vertex_count = seen
        elif vertex_count < seen:
            raise ValidationError("vertex_count %d below max index" % vertex_count)
        self.vertex_count = int(vertex_count)
        self._validate()

    def _validate(self):
        for i, (t, L) in enumerate(zip(self.triangles, self.lengths)):
            if len(set(t)) != 3:
                raise ValidationError("triangle %d has repeated vertices" % i)
            if min(t) < 0:
                raise ValidationError("negative vertex id in triangle %d" % i)
            a, b, c = L
            if min(a, b, c) <= 0.0:
                raise DegenerateTriangle("nonpositive side in triangle %d" % i)
            scale = max(a, b, c)
            if a + b - c <= 1e-12 * scale or b + c - a <= 1e-12 * scale \
                    or c + a - b <= 1e-12 * scale:
                raise DegenerateTriangle(
                    "triangle %d violates the strict triangle inequality" % i)
        if len(set(self.triangles)) != len(self.triangles) or \
                len(set(frozenset(t) for t in self.triangles)) != len(self.triangles):
            raise ValidationError("duplicate triangle")
        sides = {}
        for i, t in enumerate(self.triangles):
            for j in range(3):
                key = frozenset((t[j], t[(j + 1) % 3]))
                sides.setdefault(key, []).append((i, j))
        for key, lst in sides.items():
            if len(lst) > 2:
                raise NonManifoldEdge(
                    "edge %s lies on %d sides" % (sorted(key), len(lst)))
            if len(lst) == 2:
                (i, j), (k, l) = lst
                la, lb = self.lengths[i][j], self.lengths[k][l]
                if abs(la - lb) > 1e-9 * max(1.0, la, lb):
                    raise LengthMismatch(
                        "glued sides (%d,%d) and (%d,%d): %.12g vs %.12g"
                        % (i, j, k, l, la, lb))
        self._sides = sides
        # connectivity over the gluing graph; a hanging record bridges the
        # coarse side to the finer subedges it geometrically overlaps
        adj = [[] for _ in self.triangles]
        for lst in sides.values():
            if len(lst) == 2:
                adj[lst[0][0]].append(lst[1][0])
                adj[lst[1][0]].append(lst[0][0])
        for u, m, w in self.hanging:
            coarse = [i for i, _ in sides.get(frozenset((u, w)), [])]
            fine = [i for i, _ in sides.get(frozenset((u, m)), [])]
            fine += [i for i, _ in sides.get(frozenset((m, w)), [])]
            for i in coarse:
                for k in fine:
                    adj[i].append(k)
                    adj[k].append(i)
        seen = {0}
        stack = [0]
        while stack:
            i = stack.pop()
            for k in adj[i]:
                if k not in seen:
                    seen.add(k)
                    stack.append(k)
        if len(seen) != len(self.triangles):
            raise Disconnected(
                "gluing graph has %d of %d triangles reachable"
                % (len(seen), len(self.triangles)))
        used = set()
        for t in self.triangles:
            used.update(t)
        if len(used) != self.vertex_count:
            raise ValidationError("isolated vertex ids present")

    # ---- constructors ----

    @classmethod
    def from_side_lengths_and_gluing(cls, lengths, gluings):
        """Build from per-triangle side lengths and a list of side gluings.

        Each gluing is ((i, j), (k, l)) or ((i, j), (k, l), flip); with
        flip=True (default) the identification is orientation-compatible,
        corner j of triangle i meeting corner l+1 of triangle k.
        """
        n = len(lengths)
        parent = list(range(3 * n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x, y):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[max(rx, ry)] = min(rx, ry)

        def corner(i, j):
            return 3 * i + j % 3

        norm = []
        seen_sides = set()
        for g in gluings:
            if len(g) == 2:
                (i, j), (k, l) = g
                flip = True
            else:
                (i, j), (k, l), flip = g
            i, j, k, l = int(i), int(j), int(k), int(l)
            if not (0 <= i < n and 0 <= k < n and 0 <= j < 3 and 0 <= l < 3):
                raise ValidationError("gluing (%d,%d)-(%d,%d) out of range" % (i, j, k, l))
            if (i, j) == (k, l):
                raise ValidationError("side (%d,%d) glued to itself" % (i, j))
            for side in ((i, j), (k, l)):
                if side in seen_sides:
                    raise ValidationError("side (%d,%d) glued twice" % side)
                seen_sides.add(side)
            if flip:
                union(corner(i, j), corner(k, l + 1))
                union(corner(i, j + 1), corner(k, l))
            else:
                union(corner(i, j), corner(k, l))
                union(corner(i, j + 1), corner(k, l + 1))
            norm.append(((i, j), (k, l), bool(flip)))
        labels = {}
        triangles = []
        for i in range(n):
            tri = []
            for j in range(3):
                r = find(corner(i, j))
                if r not in labels:
                    labels[r] = len(labels)
                tri.append(labels[r])
            triangles.append(tuple(tri))
        geom = cls(triangles, lengths, len(labels))
        # the quotient must reproduce the requested gluing and nothing more
        glued_keys = set()
        for (i, j), (k, l), _ in norm:
            a = frozenset((triangles[i][j], triangles[i][(j + 1) % 3]))
            b = frozenset((triangles[k][l], triangles[k][(l + 1) % 3]))
            if a != b:
                raise ValidationError(
                    "gluing (%d,%d)-(%d,%d) inconsistent with vertex quotient"
                    % (i, j, k, l))
            glued_keys.add(a)
        for key, lst in geom._sides.items():
            if len(lst) == 2 and key not in glued_keys:
                raise ValidationError(
                    "sides %s coincide without being glued" % (sorted(key),))
        return geom

    @classmethod
    def from_vertex_mesh(cls, points, triangles):
        """Build from vertex coordinates (2D or 3D) and index triples."""
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] not in (2, 3):
            raise ValidationError("points must be an (n,2) or (n,3) array")
        lengths = []
        for t in triangles:
            a, b, c = (int(v) for v in t)
            lengths.append((
                float(np.linalg.norm(pts[b] - pts[a])),
                float(np.linalg.norm(pts[c] - pts[b])),
                float(np.linalg.norm(pts[a] - pts[c])),
            ))
        return cls(triangles, lengths, len(pts))

    # ---- inspection ----

    @property
    def diameters(self):
        return tuple(max(L) for L in self.lengths)

    @property
    def area(self):
        return sum(_heron(*L) for L in self.lengths)

    @property
    def is_closed(self):
        return all(len(lst) == 2 for lst in self._sides.values())

    @property
    def euler_characteristic(self):
        """V - E + T of the underlying space.

        In a hanging state the coarse side and its two finer subedges are
        the same geometric edge counted twice, so each record adds one back.
        """
        return (self.vertex_count - len(self._sides) + len(self.triangles)
                + len(self.hanging))

    @property
    def glued_pairs(self):
        out = []
        for lst in self._sides.values():
            if len(lst) == 2:
                out.append((lst[0][0], lst[1][0]))
        return tuple(sorted(out))

    def check_admissible(self, lo=ANGLE_LO, hi=ANGLE_HI):
        """Raise NonAdmissibleAngles unless every angle is strictly inside (lo, hi)."""
        for i, L in enumerate(self.lengths):
            for ang in triangle_angles(L):
                if not (lo < ang < hi):
                    raise NonAdmissibleAngles(
                        "triangle %d has angle %.6f outside (%.6f, %.6f)"
                        % (i, ang, lo, hi))

    def __repr__(self):
        return "GeometricSurface(T=%d, V=%d, closed=%s%s)" % (
            len(self.triangles), self.vertex_count, self.is_closed,
            ", hanging=%d" % len(self.hanging) if self.hanging else "")


def geom_from_json_dict(data):
    """Read the "dias-geom/1" side-length format."""
    if data.get("format", "dias-geom/1") != "dias-geom/1":
        raise ValidationError("unsupported geometry format %r" % data.get("format"))
    if "lengths" not in data:
        raise ValidationError("geometry JSON lacks 'lengths'")
    return GeometricSurface.from_side_lengths_and_gluing(
        data["lengths"], data.get("gluing", []))


def geom_to_json_dict(geom):
    """Vertex-resolved dump of a GeometricSurface (triangles share ids)."""
    return {
        "format": "dias-geom/1",
        "lengths": [list(L) for L in geom.lengths],
        "triangles": [list(t) for t in geom.triangles],
        "vertices": geom.vertex_count,
    }


def subdivision_levels(diameters, glued_pairs):
    """Per-triangle 4-split counts for the balanced size uniformization.

    Level floor(log2(d_i/d_min)) brings every diameter into [d_min, 2 d_min),
    then a 2:1 balance pass raises any triangle sitting two or more levels
    below a glued neighbor.  Already uniform input gets all zeros.
    """
    diams = [float(d) for d in diameters]
    dmin = min(diams)
    if dmin <= 0.0:
        raise ValidationError("nonpositive diameter")
    levels = []
    for d in diams:
        lev = 0
        while d >= dmin * (2.0 ** (lev + 1)) * (1.0 - 1e-12):
            lev += 1
        levels.append(lev)
    nbrs = [[] for _ in diams]
    for i, k in glued_pairs:
        nbrs[i].append(k)
        nbrs[k].append(i)
    work = sorted(range(len(diams)), key=lambda i: -levels[i])
    while work:
        i = work.pop(0)
        for k in nbrs[i]:
            if levels[k] < levels[i] - 1:
                levels[k] = levels[i] - 1
                work.append(k)
    return levels


def _side_key(geom, i, j):
    """Canonical orbit key and orientation flag for side j of triangle i."""
    t = geom.triangles[i]
    u, w = t[j], t[(j + 1) % 3]
    if u < w:
        return (u, w), False
    return (w, u), True


def apply_subdivision(geom, levels):
    """Midpoint 4-split each triangle the given number of times.

    Children of a triangle are all similar to it with ratio 1/2^level, so
    side lengths follow directly.  Lattice points on shared edges are keyed
    by exact dyadic fractions along the canonical edge orientation, making
    the identification across a gluing exact; a level mismatch of one leaves
    hanging midpoints, recorded on the result for the repair stage.  A
    mismatch of two or more raises BalanceViolated.
    """
    if len(levels) != len(geom.triangles):
        raise ValidationError("need one level per triangle")
    for lst in geom._sides.values():
        if len(lst) == 2:
            (i, _), (k, _) = lst
            if abs(levels[i] - levels[k]) > 1:
                raise BalanceViolated(
                    "glued triangles %d,%d at levels %d,%d" % (i, k, levels[i], levels[k]))

    ids = {}

    def point_id(key):
        if key not in ids:
            ids[key] = len(ids)
        return ids[key]

    def lattice_key(i, p, q, n):
        """Exact identity of lattice point (p, q)/n inside triangle i."""
        t = geom.triangles[i]
        r = n - p - q
        if r == n:
            return ("v", t[0])
        if p == n:
            return ("v", t[1])
        if q == n:
            return ("v", t[2])
        if q == 0:  # side 0, from corner 0 to corner 1, parameter p/n
            key, rev = _side_key(geom, i, 0)
            f = Fraction(p, n)
            return ("e", key, 1 - f if rev else f)
        if r == 0:  # side 1, from corner 1 to corner 2, parameter q/n
            key, rev = _side_key(geom, i, 1)
            f = Fraction(q, n)
            return ("e", key, 1 - f if rev else f)
        if p == 0:  # side 2, from corner 2 to corner 0, parameter (n-q)/n
            key, rev = _side_key(geom, i, 2)
            f = Fraction(n - q, n)
            return ("e", key, 1 - f if rev else f)
        return ("t", i, Fraction(p, n), Fraction(q, n))

    new_tris = []
    new_lens = []
    for i, (t, L) in enumerate(zip(geom.triangles, geom.lengths)):
        n = 2 ** int(levels[i])
        a, b, c = (x / n for x in L)
        grid = {}
        for p in range(n + 1):
            for q in range(n + 1 - p):
                grid[(p, q)] = point_id(lattice_key(i, p, q, n))
        for p in range(n):
            for q in range(n - p):
                new_tris.append((grid[(p, q)], grid[(p + 1, q)], grid[(p, q + 1)]))
                new_lens.append((a, b, c))
                if p + q <= n - 2:
                    new_tris.append(
                        (grid[(p + 1, q)], grid[(p + 1, q + 1)], grid[(p, q + 1)]))
                    new_lens.append((c, a, b))

    # hanging midpoints: fine-side lattice points absent from the coarse side
    hanging = []
    for lst in geom._sides.values():
        if len(lst) != 2:
            continue
        (i, j), (k, l) = lst
        if levels[i] == levels[k]:
            continue
        coarse = 2 ** min(levels[i], levels[k])
        key, _ = _side_key(geom, i, j)
        nf = 2 * coarse
        for bnum in range(1, nf, 2):
            m = ids[("e", key, Fraction(bnum, nf))]
            left = Fraction(bnum - 1, nf)
            right = Fraction(bnum + 1, nf)
            u = ids[("v", key[0])] if left == 0 else ids[("e", key, left)]
            w = ids[("v", key[1])] if right == 1 else ids[("e", key, right)]
            hanging.append((u, m, w))
    hanging.sort()

    out = GeometricSurface(new_tris, new_lens, len(ids), hanging=hanging)
    if out.euler_characteristic != geom.euler_characteristic:
        raise ValidationError("subdivision changed the Euler characteristic")
    return out


def uniformize_sizes(geom, lo=ANGLE_LO, hi=ANGLE_HI):
    """Balanced 4-splits until all diameters agree within a factor of two."""
    geom.check_admissible(lo, hi)
    levels = subdivision_levels(geom.diameters, geom.glued_pairs)
    if not any(levels):
        return geom
    return apply_subdivision(geom, levels)


def repair_hanging_vertices(geom):
    """Bisect away every hanging midpoint left by unequal subdivision levels.

    Each record (u, m, w) names a full side u-w of exactly one triangle with
    the midpoint m held only by the finer neighbors; that triangle is split
    along the segment from m to its opposite vertex.  Every bisection
    consumes exactly one record, so the loop terminates.
    """
    if not geom.hanging:
        return geom
    tris = [list(t) for t in geom.triangles]
    lens = [list(L) for L in geom.lengths]
    alive = [True] * len(tris)
    by_side = {}
    for i, t in enumerate(tris):
        for j in range(3):
            by_side.setdefault(frozenset((t[j], t[(j + 1) % 3])), []).append(i)

    def median(base, s1, s2):
        return 0.5 * math.sqrt(max(2 * s1 * s1 + 2 * s2 * s2 - base * base, 0.0))

    for u, m, w in geom.hanging:
        cands = [i for i in by_side.get(frozenset((u, w)), []) if alive[i]]
        if len(cands) != 1:
            raise ValidationError(
                "hanging record (%d,%d,%d) matches %d triangles" % (u, m, w, len(cands)))
        i = cands[0]
        t, L = tris[i], lens[i]
        j = next(jj for jj in range(3) if {t[jj], t[(jj + 1) % 3]} == {u, w})
        apex = t[(j + 2) % 3]
        base = L[j]
        s_next = L[(j + 1) % 3]   # side from t[j+1] to apex
        s_prev = L[(j + 2) % 3]   # side from apex to t[j]
        med = median(base, s_next, s_prev)
        tu, tw = t[j], t[(j + 1) % 3]
        kids = [([tu, m, apex], [0.5 * base, med, s_prev]),
                ([m, tw, apex], [0.5 * base, s_next, med])]
        alive[i] = False
        for kt, kl in kids:
            idx = len(tris)
            tris.append(kt)
            lens.append(kl)
            alive.append(True)
            for jj in range(3):
                by_side.setdefault(
                    frozenset((kt[jj], kt[(jj + 1) % 3])), []).append(idx)

    keep_t = [tuple(t) for i, t in enumerate(tris) if alive[i]]
    keep_l = [tuple(L) for i, L in enumerate(lens) if alive[i]]
    out = GeometricSurface(keep_t, keep_l, geom.vertex_count)
    if out.euler_characteristic != geom.euler_characteristic:
        raise ValidationError("repair changed the Euler characteristic")
    return out


def to_equilateral(geom):
    """Declare every triangle unit equilateral; certify the distortion.

    Returns the combinatorial surface together with a DistortionReport whose
    per-triangle entries are max(s1, 1/s2) for the affine map onto the unit
    equilateral triangle.  The report also carries the size-optimal global
    rescaling, whose constant sqrt(max s1 / min s2) is scale-invariant.
    """
    if geom.hanging:
        raise ValidationError("%d hanging vertices; run repair first" % len(geom.hanging))
    if not geom.is_closed:
        raise ValidationError("surface has boundary; cannot equilateralize")
    surface = SimplicialSurface(geom.triangles, geom.vertex_count)
    sig = [triangle_distortion(L) for L in geom.lengths]
    per = tuple(max(s1, 1.0 / s2) for s1, s2 in sig)
    global_k = max(per)
    big = max(s1 for s1, _ in sig)
    small = min(s2 for _, s2 in sig)
    scale = 1.0 / math.sqrt(big * small)
    scaled_k = math.sqrt(big / small)
    area_ratio = surface.area / geom.area
    report = DistortionReport(
        per_triangle=per,
        global_k=global_k,
        stage_bounds=(8.0, 32.0, 33.0),
        area_ratio=area_ratio,
        scale=scale,
        scaled_global_k=scaled_k,
    )
    if not (global_k ** -2 - 1e-9 <= area_ratio <= global_k ** 2 + 1e-9):
        raise ValidationError(
            "area ratio %.6g escapes [K^-2, K^2] for K=%.6g" % (area_ratio, global_k))
    if surface.topology.euler_characteristic != geom.euler_characteristic:
        raise ValidationError("equilateralization changed the Euler characteristic")
    return surface, report


def equilateralize(geom, lo=ANGLE_LO, hi=ANGLE_HI):
    """Full pipeline: uniformize sizes, repair hanging vertices, equilateralize."""
    uni = uniformize_sizes(geom, lo, hi)
    rep = repair_hanging_vertices(uni)
    return to_equilateral(rep)
