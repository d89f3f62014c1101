"""Pure-Python containment kernel, used when the compiled core is unavailable."""

from __future__ import annotations


def neighbour_table(pattern):
    """For each index j, the earlier indices holding the nearest smaller and larger values."""
    k = len(pattern)
    lo = [-1] * k
    hi = [-1] * k
    for j in range(k):
        v = pattern[j]
        best_lo = best_hi = -1
        for i in range(j):
            u = pattern[i]
            if u < v and (best_lo < 0 or u > pattern[best_lo]):
                best_lo = i
            elif u > v and (best_hi < 0 or u < pattern[best_hi]):
                best_hi = i
        lo[j] = best_lo
        hi[j] = best_hi
    return lo, hi


def contains(pattern, text):
    """True iff ``text`` has a subsequence order-isomorphic to ``pattern``.

    Both arguments are sequences of distinct integers in one-line form.
    """
    k = len(pattern)
    n = len(text)
    if k == 0:
        return True
    if k > n:
        return False
    lo, hi = neighbour_table(pattern)
    vals = [0] * k
    nxt = [0] * k  # next candidate position to try at each depth
    j = 0
    nxt[0] = 0
    while j >= 0:
        last = n - k + j
        c = nxt[j]
        found = False
        lj = lo[j]
        hj = hi[j]
        while c <= last:
            v = text[c]
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
        nxt[j] = c
        vals[j] = v
        if j == k - 1:
            return True
        j += 1
        nxt[j] = c
    return False
