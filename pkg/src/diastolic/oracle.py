"""Brute-force ground truth for small meshes.

Two independent computations used to check the constructive pipeline: the
exact simplicial Cheeger constant by enumerating every 2-coloring of the
triangles, and the exact minimal achievable max mass over single-triangle-
move sweep-outs by a bottleneck shortest path on the subset lattice.  Both
are exponential and guarded by explicit size caps.
"""

import heapq

from . import kernels
from .chains import OneCycle, SweepOut, TwoChain
from .errors import TooLarge
from .spectral import split_from_order
from .surface import UNIT_TRIANGLE_AREA

CHEEGER_CAP = 24
SWEEP_CAP = 12


def exact_cheeger(surface):
    """Minimum of cut/min(area, complement area) over all triangle subsets.

    Returns (value, Decomposition witness).  Exponential enumeration,
    capped at 24 triangles.
    """
    n = len(surface.triangles)
    if n > CHEEGER_CAP:
        raise TooLarge("%d triangles exceeds the %d enumeration cap" % (n, CHEEGER_CAP))
    if n < 2:
        raise TooLarge("need at least two triangles to split")
    best_cut, best_small, best_mask, _, _ = kernels.cheeger_scan(surface)
    inside = [t for t in range(n) if best_mask >> t & 1]
    if len(inside) != best_small:
        inside = [t for t in range(n) if not best_mask >> t & 1]
    order = inside + [t for t in range(n) if t not in set(inside)]
    dec = split_from_order(surface, order, len(inside))
    value = best_cut / (UNIT_TRIANGLE_AREA * best_small)
    return value, dec


def minimal_sweep_max_mass(surface):
    """Exact minimax of frontier mass over single-triangle-move sweeps.

    State = subset of swept triangles; moves toggle one triangle; the cost
    of a path is the largest frontier mass it ever shows, minimized by a
    Dijkstra-style bottleneck search.  Returns (optimum, witness SweepOut
    over Z/2).  Capped at 12 triangles.
    """
    n = len(surface.triangles)
    if n > SWEEP_CAP:
        raise TooLarge("%d triangles exceeds the %d search cap" % (n, SWEEP_CAP))
    nbr = surface.triangle_neighbors
    full = (1 << n) - 1

    # frontier mass of every subset, built one bit flip at a time
    mass = [0] * (full + 1)
    for s in range(1, full + 1):
        t = (s & -s).bit_length() - 1
        prev = s ^ (1 << t)
        k = sum(1 for u in nbr[t] if prev >> u & 1)
        mass[s] = mass[prev] + 3 - 2 * k

    INF = float("inf")
    dist = [INF] * (full + 1)
    dist[0] = 0
    parent = [-1] * (full + 1)
    heap = [(0, 0)]
    while heap:
        d, s = heapq.heappop(heap)
        if d > dist[s]:
            continue
        if s == full:
            break
        for t in range(n):
            s2 = s ^ (1 << t)
            d2 = d if mass[s2] <= d else mass[s2]
            if d2 < dist[s2]:
                dist[s2] = d2
                parent[s2] = s
                heapq.heappush(heap, (d2, s2))

    # reconstruct the state path and write it as a sweep-out
    path = [full]
    while path[-1] != 0:
        path.append(parent[path[-1]])
    path.reverse()
    steps = [OneCycle(surface, {}, "Z2")]
    certs = []
    for prev, cur in zip(path, path[1:]):
        t = (prev ^ cur).bit_length() - 1
        c = TwoChain(surface, {t: 1}, "Z2")
        certs.append(c)
        steps.append(steps[-1] + c.boundary())
    witness = SweepOut(surface, steps, certs, "Z2")
    report = witness.verify()
    if not report.accepted:
        raise AssertionError("oracle witness failed verification: %r" % (report,))
    if witness.max_mass != dist[full]:
        raise AssertionError(
            "oracle witness mass %d != search optimum %d"
            % (witness.max_mass, dist[full])
        )
    return dist[full], witness
