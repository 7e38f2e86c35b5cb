"""Bundled test meshes.

Nine closed surfaces spanning genus 0..2 plus a nonorientable one, kept as
JSON under diastolic/data so every check runs offline and deterministically.
The constructors below are the source of the data files; `python -m
diastolic.corpus` regenerates them.
"""

import json
from importlib import resources

from .surface import build_surface, subdivide_midpoint

TETRAHEDRON = [(0, 1, 2), (0, 2, 3), (0, 3, 1), (1, 3, 2)]

OCTAHEDRON = [
    (0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 1),
    (5, 2, 1), (5, 3, 2), (5, 4, 3), (5, 1, 4),
]

ICOSAHEDRON = [
    (0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 5, 1),
    (1, 6, 2), (2, 7, 3), (3, 8, 4), (4, 9, 5), (5, 10, 1),
    (6, 7, 2), (7, 8, 3), (8, 9, 4), (9, 10, 5), (10, 6, 1),
    (11, 7, 6), (11, 8, 7), (11, 9, 8), (11, 10, 9), (11, 6, 10),
]


def csaszar_triangles():
    """The 7-vertex torus: orbits {i, i+1, i+3} and {i, i+2, i+3} mod 7."""
    tris = []
    for i in range(7):
        tris.append((i, (i + 1) % 7, (i + 3) % 7))
    for i in range(7):
        tris.append((i, (i + 2) % 7, (i + 3) % 7))
    return tris


def genus2_triangles():
    """Two 7-vertex tori, each minus one triangle, glued along the hole."""
    removed = frozenset({0, 1, 3})
    base = [t for t in csaszar_triangles() if frozenset(t) != removed]
    relabel = {7: 0, 8: 1, 9: 7, 10: 3, 11: 8, 12: 9, 13: 10}
    tris = list(base)
    for t in base:
        mapped = tuple(relabel[v + 7] for v in t)
        # reverse the copy so the orientations agree across the seam
        tris.append((mapped[0], mapped[2], mapped[1]))
    return tris


def klein_triangles(k=4):
    """A k*k grid torus with one circular direction glued by a flip."""

    def vid(i, j):
        j %= k
        if i == k:
            i, j = 0, (k - j) % k
        return k * i + j

    tris = []
    for i in range(k):
        for j in range(k):
            a, b = vid(i, j), vid(i + 1, j)
            c, d = vid(i, j + 1), vid(i + 1, j + 1)
            tris.append((a, b, c))
            tris.append((b, d, c))
    return tris


def _builders():
    ico = build_surface(ICOSAHEDRON)
    sub1 = subdivide_midpoint(ico)
    sub2 = subdivide_midpoint(sub1)
    sub3 = subdivide_midpoint(sub2)
    return {
        "tetrahedron": lambda: build_surface(TETRAHEDRON),
        "octahedron": lambda: build_surface(OCTAHEDRON),
        "icosahedron": lambda: ico,
        "icosahedron_sub1": lambda: sub1,
        "icosahedron_sub2": lambda: sub2,
        "icosahedron_sub3": lambda: sub3,
        "csaszar_torus": lambda: build_surface(csaszar_triangles()),
        "genus2": lambda: build_surface(genus2_triangles()),
        "klein_bottle": lambda: build_surface(klein_triangles()),
    }


NAMES = (
    "tetrahedron",
    "octahedron",
    "icosahedron",
    "icosahedron_sub1",
    "icosahedron_sub2",
    "icosahedron_sub3",
    "csaszar_torus",
    "genus2",
    "klein_bottle",
)


def names():
    return list(NAMES)


def mesh(name):
    """Load a bundled mesh by name from the packaged JSON."""
    if name not in NAMES:
        raise KeyError("unknown corpus mesh %r" % name)
    ref = resources.files("diastolic").joinpath("data", name + ".json")
    data = json.loads(ref.read_text())
    return build_surface(data["triangles"], data.get("vertices"))


def write_data_files(directory):
    import os

    os.makedirs(directory, exist_ok=True)
    built = _builders()
    for name in NAMES:
        s = built[name]()
        path = os.path.join(directory, name + ".json")
        with open(path, "w") as fh:
            json.dump(s.to_json_dict(), fh, separators=(",", ":"))
            fh.write("\n")


if __name__ == "__main__":
    import os

    here = os.path.dirname(os.path.abspath(__file__))
    write_data_files(os.path.join(here, "data"))
    print("wrote corpus to", os.path.join(here, "data"))
