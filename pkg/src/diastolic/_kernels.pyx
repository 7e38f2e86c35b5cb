# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; semantics identical to _kernels_py."""

from libc.stdlib cimport calloc, free


def greedy_order(int[:] nbr, int n):
    # lazy min-heap over keys (3 - k[t]) << 32 | t: pops the triangle with
    # the most swept neighbors first, smallest index on ties, matching the
    # (-k, t) tuple order of the pure twin
    cdef int *k = <int *> calloc(n, sizeof(int))
    cdef char *swept = <char *> calloc(n, sizeof(char))
    cdef unsigned long long *heap = \
        <unsigned long long *> calloc(4 * n + 1, sizeof(unsigned long long))
    cdef unsigned long long key, tmp
    cdef Py_ssize_t size = 0, pos, child
    cdef int t, u, j, done = 0
    if k == NULL or swept == NULL or heap == NULL:
        free(k)
        free(swept)
        free(heap)
        raise MemoryError()
    order = []
    try:
        # equal counts and increasing index: already a valid heap
        for t in range(n):
            heap[size] = (3ULL << 32) | <unsigned long long> t
            size += 1
        while done < n:
            key = heap[0]
            size -= 1
            heap[0] = heap[size]
            pos = 0
            while True:
                child = 2 * pos + 1
                if child >= size:
                    break
                if child + 1 < size and heap[child + 1] < heap[child]:
                    child += 1
                if heap[child] < heap[pos]:
                    tmp = heap[pos]
                    heap[pos] = heap[child]
                    heap[child] = tmp
                    pos = child
                else:
                    break
            t = <int> (key & 0xffffffffULL)
            if swept[t] or <int> (3ULL - (key >> 32)) != k[t]:
                continue
            swept[t] = 1
            order.append(t)
            done += 1
            for j in range(3):
                u = nbr[3 * t + j]
                if not swept[u]:
                    k[u] += 1
                    pos = size
                    heap[size] = ((<unsigned long long> (3 - k[u])) << 32) \
                        | <unsigned long long> u
                    size += 1
                    while pos > 0 and heap[(pos - 1) // 2] > heap[pos]:
                        tmp = heap[pos]
                        heap[pos] = heap[(pos - 1) // 2]
                        heap[(pos - 1) // 2] = tmp
                        pos = (pos - 1) // 2
    finally:
        free(k)
        free(swept)
        free(heap)
    return order


def cheeger_scan(int[:] nbr, int n):
    cdef char *in_s = <char *> calloc(n, sizeof(char))
    if in_s == NULL:
        raise MemoryError()
    cdef unsigned long long i, total, mask = 0, best_mask = 0, bal_mask = 0, bit
    cdef int cut = 0, size = 0, t, j, small
    cdef int best_cut = -1, best_small = 1, bal_cut = -1
    cdef int lo, hi
    if n % 2 == 0:
        lo = n // 2
        hi = n // 2
    else:
        lo = (n - 1) // 2
        hi = (n + 1) // 2
    total = 1ULL << (n - 1)
    try:
        i = 1
        while i < total:
            bit = i & (-i)
            t = 0
            while not (bit & 1ULL):
                bit >>= 1
                t += 1
            mask ^= 1ULL << t
            if in_s[t]:
                in_s[t] = 0
                size -= 1
                for j in range(3):
                    if in_s[nbr[3 * t + j]]:
                        cut += 1
                    else:
                        cut -= 1
            else:
                in_s[t] = 1
                size += 1
                for j in range(3):
                    if in_s[nbr[3 * t + j]]:
                        cut -= 1
                    else:
                        cut += 1
            small = size if size <= n - size else n - size
            if best_cut < 0 or cut * best_small < best_cut * small:
                best_cut = cut
                best_small = small
                best_mask = mask
            if lo <= size <= hi and (bal_cut < 0 or cut < bal_cut):
                bal_cut = cut
                bal_mask = mask
            i += 1
    finally:
        free(in_s)
    return best_cut, best_small, int(best_mask), bal_cut, int(bal_mask)
