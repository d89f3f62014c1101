# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled containment kernel; mirrors ``_pykernels.contains``."""

from libc.stdlib cimport malloc, free


def contains(pattern, text):
    cdef Py_ssize_t k = len(pattern)
    cdef Py_ssize_t n = len(text)
    if k == 0:
        return True
    if k > n:
        return False
    cdef int *buf = <int *> malloc((5 * k + n) * sizeof(int))
    if buf == NULL:
        raise MemoryError()
    cdef int *p = buf
    cdef int *lo = buf + k
    cdef int *hi = buf + 2 * k
    cdef int *vals = buf + 3 * k
    cdef int *nxt = buf + 4 * k
    cdef int *t = buf + 5 * k
    cdef Py_ssize_t i, j, c, last
    cdef int v, u, best_lo, best_hi, lj, hj
    cdef bint found, result = False
    try:
        for i in range(k):
            p[i] = pattern[i]
        for i in range(n):
            t[i] = text[i]
        for j in range(k):
            v = p[j]
            best_lo = -1
            best_hi = -1
            for i in range(j):
                u = p[i]
                if u < v and (best_lo < 0 or u > p[best_lo]):
                    best_lo = <int> i
                elif u > v and (best_hi < 0 or u < p[best_hi]):
                    best_hi = <int> i
            lo[j] = best_lo
            hi[j] = best_hi
        j = 0
        nxt[0] = 0
        while j >= 0:
            last = n - k + j
            c = nxt[j]
            found = False
            lj = lo[j]
            hj = hi[j]
            while c <= last:
                v = t[c]
                c += 1
                if lj >= 0 and v < vals[lj]:
                    continue
                if hj >= 0 and v > vals[hj]:
                    continue
                found = True
                break
            if not found:
                j -= 1
                continue
            nxt[j] = <int> c
            vals[j] = v
            if j == k - 1:
                result = True
                break
            j += 1
            nxt[j] = <int> c
    finally:
        free(buf)
    return result
