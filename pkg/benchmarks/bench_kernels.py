"""Timing comparison of the compiled kernels against the pure Python twin.

Usage: python benchmarks/bench_kernels.py [--repeat N]

Both backends see identical flat neighbor arrays, so the numbers isolate
the kernel cost from mesh construction.
"""

import argparse
import time

import numpy as np

from diastolic import corpus, kernels


def flat(surface):
    return np.asarray(surface.triangle_neighbors, dtype=np.int32).reshape(-1)


def time_call(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3,
                    help="repetitions per measurement, best is kept")
    args = ap.parse_args()

    mods = kernels.backends()
    print("active backend: %s (available: %s)"
          % (kernels.BACKEND, ", ".join(sorted(mods))))

    big = corpus.subdivide_midpoint(corpus.mesh("icosahedron_sub3"))
    scan_mesh = corpus.mesh("icosahedron")
    jobs = [
        ("greedy_order N=%d" % len(big.triangles), big,
         lambda m, nbr, n: m.greedy_order(nbr, n)),
        ("cheeger_scan N=%d" % len(scan_mesh.triangles), scan_mesh,
         lambda m, nbr, n: m.cheeger_scan(nbr, n)),
    ]

    for label, mesh, call in jobs:
        nbr = flat(mesh)
        n = len(mesh.triangles)
        times = {}
        for key, mod in sorted(mods.items()):
            times[key] = time_call(lambda: call(mod, nbr, n), args.repeat)
            print("  %-22s %-9s %8.4f s" % (label, key, times[key]))
        if "pure" in times and "compiled" in times:
            print("  %-22s speedup   %8.2fx"
                  % (label, times["pure"] / times["compiled"]))


if __name__ == "__main__":
    main()
