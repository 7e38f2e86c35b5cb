"""Spectral machinery on the unit-equilateral metric.

The piecewise-linear Laplacian of a surface whose triangles are all unit
equilateral has weight cot(pi/3) = 1/sqrt(3) on every edge, and the lumped
vertex mass is deg(v) * sqrt(3)/12 (a third of the incident triangle area).
lambda1 of the pencil (L, M) is computed by a deflated Lanczos iteration
written here; no external eigensolver is involved beyond the dense solve of
the small tridiagonal matrix.
"""

import math
from dataclasses import dataclass

import numpy as np

from .chains import OneCycle
from .errors import ConvergenceFailure, ValidationError
from .surface import UNIT_TRIANGLE_AREA

SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class Decomposition:
    """A two-sided split of a surface along a separating one-cycle."""

    domain1: tuple
    domain2: tuple
    delta: OneCycle
    ratio: float

    @property
    def delta_length(self):
        return self.delta.mass


def laplacian_arrays(surface):
    """(eu, ev, degree, mass) arrays for the cotangent pencil."""
    edges = np.asarray(surface.edges, dtype=np.int64)
    eu, ev = edges[:, 0], edges[:, 1]
    deg = np.zeros(surface.vertex_count, dtype=np.int64)
    for a, b, c in surface.triangles:
        deg[a] += 1
        deg[b] += 1
        deg[c] += 1
    mass = deg * (SQRT3 / 12.0)
    return eu, ev, deg, mass


def _apply_laplacian(x, eu, ev, deg):
    y = deg * x
    np.subtract.at(y, eu, x[ev])
    np.subtract.at(y, ev, x[eu])
    return y / SQRT3


def lambda1(surface, tol=1e-8, seed=42, max_matvec=100000):
    """Smallest nonzero eigenvalue of L w = lambda M w, with eigenvector.

    Deflated Lanczos with full reorthogonalization on the symmetrized
    operator; the constant kernel is projected out of every iterate.
    Convergence is declared when ||L w - lambda M w|| <= tol * ||w||.
    """
    eu, ev, deg, mass = laplacian_arrays(surface)
    nv = surface.vertex_count
    minv = 1.0 / np.sqrt(mass)
    u0 = np.sqrt(mass)
    u0 /= np.linalg.norm(u0)

    def op(x):
        return minv * _apply_laplacian(minv * x, eu, ev, deg.astype(float))

    rng = np.random.RandomState(seed)
    start = rng.standard_normal(nv)
    used = 0
    kmax = nv - 1
    k = min(kmax, 32)
    while True:
        q = start - u0 * (u0 @ start)
        nq = np.linalg.norm(q)
        if nq < 1e-14:
            q = rng.standard_normal(nv)
            q -= u0 * (u0 @ q)
            nq = np.linalg.norm(q)
        q /= nq
        Q = np.empty((nv, k))
        alpha = np.zeros(k)
        beta = np.zeros(k)
        Q[:, 0] = q
        j = 0
        while j < k:
            w = op(Q[:, j])
            used += 1
            alpha[j] = Q[:, j] @ w
            w -= alpha[j] * Q[:, j]
            if j > 0:
                w -= beta[j - 1] * Q[:, j - 1]
            # full reorthogonalization, kernel included
            w -= u0 * (u0 @ w)
            w -= Q[:, : j + 1] @ (Q[:, : j + 1].T @ w)
            b = np.linalg.norm(w)
            if b < 1e-13 or j + 1 == k:
                j += 1
                break
            beta[j] = b
            Q[:, j + 1] = w / b
            j += 1
        T = np.diag(alpha[:j]) + np.diag(beta[: j - 1], 1) + np.diag(beta[: j - 1], -1)
        evals, evecs = np.linalg.eigh(T)
        theta = float(evals[0])
        v = Q[:, :j] @ evecs[:, 0]
        wvec = minv * v
        nw = np.linalg.norm(wvec)
        wvec /= nw
        resid = np.linalg.norm(
            _apply_laplacian(wvec, eu, ev, deg.astype(float)) - theta * mass * wvec
        )
        if resid <= tol:
            idx = int(np.argmax(np.abs(wvec) > 1e-10 * np.max(np.abs(wvec))))
            if wvec[idx] < 0:
                wvec = -wvec
            return theta, wvec
        if used >= max_matvec or k >= kmax and j >= kmax:
            raise ConvergenceFailure(
                "lambda1 residual %.3e > %.1e after %d matvecs" % (resid, tol, used)
            )
        start = v  # warm restart from the best Ritz vector
        k = min(kmax, k * 2)


def fiedler_cut(surface, mode="cheeger", tol=1e-8, seed=42):
    """Threshold the Fiedler vector over all N-1 prefix splits.

    Triangles are scored by the mean of their vertex values and sorted by
    (score, index); the sweep keeps the split minimizing the length/area
    ratio ("cheeger") or the shortest cut among the splits whose triangle
    counts differ by at most one ("balanced").
    """
    if mode not in ("cheeger", "balanced"):
        raise ValidationError("unknown cut mode %r" % mode)
    _, w = lambda1(surface, tol=tol, seed=seed)
    n = len(surface.triangles)
    scores = [(w[a] + w[b] + w[c]) / 3.0 for a, b, c in surface.triangles]
    order = sorted(range(n), key=lambda t: (scores[t], t))

    in1 = [False] * n
    cut = 0
    best_k = -1
    best_cut = -1
    best_small = 1
    for pos, t in enumerate(order[:-1]):
        for u in surface.triangle_neighbors[t]:
            cut += -1 if in1[u] else 1
        in1[t] = True
        k = pos + 1
        small = min(k, n - k)
        if mode == "cheeger":
            if best_k < 0 or cut * best_small < best_cut * small:
                best_k, best_cut, best_small = k, cut, small
        else:
            if abs(2 * k - n) <= 1 and (best_k < 0 or cut < best_cut):
                best_k, best_cut, best_small = k, cut, small
    if best_k < 0:
        raise ValidationError("no admissible split found")
    return split_from_order(surface, order, best_k)


def split_from_order(surface, order, k):
    """Decomposition for the prefix split order[:k] | order[k:]."""
    n = len(surface.triangles)
    d1 = sorted(order[:k])
    d2 = sorted(order[k:])
    side = [False] * n
    for t in d1:
        side[t] = True
    delta_edges = {}
    for e, (t1, t2) in enumerate(surface.edge_triangles):
        if side[t1] != side[t2]:
            delta_edges[e] = 1
    delta = OneCycle(surface, delta_edges, "Z2")
    small = min(len(d1), len(d2))
    ratio = delta.mass / (UNIT_TRIANGLE_AREA * small)
    return Decomposition(tuple(d1), tuple(d2), delta, ratio)


def cheeger_bound(surface, constant=96):
    """Upper bound sqrt(constant * pi * (g+1) / area) for the Cheeger ratio.

    constant=96 always applies; 32 is the sharper orientable refinement.
    """
    if constant not in (32, 96):
        raise ValidationError("cheeger constant must be 32 or 96")
    if constant == 32 and not surface.orientable:
        raise ValidationError("constant 32 requires an orientable surface")
    g = surface.topology.genus
    return math.sqrt(constant * math.pi * (g + 1) / surface.area)


def li_yau_check(surface, lam, slack=0.10):
    """(product, bound, ok): lambda1 * area against 24 pi (g+1)."""
    g = surface.topology.genus
    product = lam * surface.area
    bound = 24.0 * math.pi * (g + 1)
    return product, bound, product <= bound * (1.0 + slack)
