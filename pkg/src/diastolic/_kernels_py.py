"""Pure Python kernels; semantics identical to the compiled module.

`nbr` is the flat dual adjacency: nbr[3*t + j] is the triangle across the
j-th edge of triangle t.  Every dual edge appears once from each side.
"""

import heapq


def greedy_order(nbr, n):
    """Sweep order: next triangle maximizes swept neighbors, ties by index.

    Adding a triangle with k swept neighbors changes the frontier mass by
    3 - 2k, so this is the greedy minimizer of the resulting mass.
    """
    nbr = list(nbr)
    k = [0] * n
    swept = [False] * n
    heap = [(0, i) for i in range(n)]
    order = []
    while len(order) < n:
        negk, t = heapq.heappop(heap)
        if swept[t] or -negk != k[t]:
            continue
        swept[t] = True
        order.append(t)
        for j in range(3):
            u = nbr[3 * t + j]
            if not swept[u]:
                k[u] += 1
                heapq.heappush(heap, (-k[u], u))
    return order


def cheeger_scan(nbr, n):
    """Exhaustive scan of all 2-splits of the dual graph.

    Returns (best_cut, best_small, best_mask, bal_cut, bal_mask) where the
    first three describe the subset minimizing cut/min(|S|, n-|S|) (compared
    exactly via cross multiplication, first minimizer in Gray-code order
    wins) and the last two the minimum-cut subset with ||S|-(n-|S|)|<=1.
    Triangle n-1 stays outside every enumerated subset; complements carry
    the same cut and side sizes.
    """
    nbr = list(nbr)
    in_s = bytearray(n)
    cut = 0
    size = 0
    mask = 0
    best_cut = -1
    best_small = 1
    best_mask = 0
    bal_cut = -1
    bal_mask = 0
    if n % 2 == 0:
        lo = hi = n // 2
    else:
        lo, hi = (n - 1) // 2, (n + 1) // 2
    total = 1 << (n - 1)
    for i in range(1, total):
        t = (i & -i).bit_length() - 1
        base = 3 * t
        if in_s[t]:
            in_s[t] = 0
            size -= 1
            mask ^= 1 << t
            for j in (base, base + 1, base + 2):
                cut += 1 if in_s[nbr[j]] else -1
        else:
            in_s[t] = 1
            size += 1
            mask ^= 1 << t
            for j in (base, base + 1, base + 2):
                cut -= 1 if in_s[nbr[j]] else -1
        small = size if size <= n - size else n - size
        if best_cut < 0 or cut * best_small < best_cut * small:
            best_cut = cut
            best_small = small
            best_mask = mask
        if lo <= size <= hi and (bal_cut < 0 or cut < bal_cut):
            bal_cut = cut
            bal_mask = mask
    return best_cut, best_small, best_mask, bal_cut, bal_mask
