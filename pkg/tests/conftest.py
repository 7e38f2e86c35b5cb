"""Shared helpers for the test suite.

No fixtures here; the functions below build geometric test inputs that
several modules want: a coordinate icosahedron and a graded-length closed
surface whose triangle sizes vary enough to force real subdivision work.
"""

import math

import numpy as np

from diastolic.equilateralize import GeometricSurface


def icosahedron_points():
    """The 12 vertices of a regular icosahedron on the unit sphere."""
    phi = (1.0 + 5.0 ** 0.5) / 2.0
    pts = []
    for s1 in (-1.0, 1.0):
        for s2 in (-phi, phi):
            pts += [(0.0, s1, s2), (s1, s2, 0.0), (s2, 0.0, s1)]
    return np.asarray(pts) / math.sqrt(1.0 + phi * phi)


def icosahedron_mesh():
    """(points, triangles) with faces recovered from nearest-neighbor pairs."""
    pts = icosahedron_points()
    d2 = ((pts[:, None, :] - pts[None, :, :]) ** 2).sum(-1)
    edge2 = d2[d2 > 1e-9].min()
    adj = d2 < edge2 * 1.01
    tris = []
    for a in range(12):
        for b in range(a + 1, 12):
            if not adj[a][b]:
                continue
            for c in range(b + 1, 12):
                if adj[a][c] and adj[b][c]:
                    tris.append((a, b, c))
    return pts, tris


def flat_subdivide(pts, tris):
    """One midpoint 4-split with midpoints kept on the flat faces."""
    pts = [np.asarray(p, dtype=float) for p in pts]
    mid = {}

    def midpoint(u, v):
        key = (min(u, v), max(u, v))
        if key not in mid:
            mid[key] = len(pts)
            pts.append((pts[u] + pts[v]) / 2.0)
        return mid[key]

    out = []
    for a, b, c in tris:
        ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
        out += [(a, ab, ca), (ab, b, bc), (ca, bc, c), (ab, bc, ca)]
    return np.asarray(pts), out


def graded_geometry(slope, jitter=0.0, seed=0):
    """Closed sphere with edge lengths scaled by exp of a height field.

    Euclidean edge lengths of a subdivided icosahedron are multiplied by
    exp((rho_u + rho_v)/2) with rho = slope * z plus optional Gaussian
    jitter, which keeps gluing lengths consistent while grading triangle
    sizes by roughly exp(2 * slope) from pole to pole.  Slopes up to 0.9
    with jitter up to 0.02 stay inside the admissible angle window.
    """
    pts, tris = flat_subdivide(*icosahedron_mesh())
    rng = np.random.default_rng(seed)
    rho = slope * pts[:, 2]
    if jitter:
        rho = rho + jitter * rng.standard_normal(len(pts))
    lengths = []
    for a, b, c in tris:
        lengths.append(tuple(
            float(np.linalg.norm(pts[v] - pts[u]) * math.exp(0.5 * (rho[u] + rho[v])))
            for u, v in ((a, b), (b, c), (c, a))))
    return GeometricSurface(tris, lengths)
