"""Permutations in one-line notation: containment, sums, symmetries, sum decomposition."""

from __future__ import annotations

import itertools
import os
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

if os.environ.get("WILFCOLLAPSE_PURE"):
    from ._pykernels import contains as _contains_kernel

    BACKEND = "python"
else:
    try:
        from ._ckernels import contains as _contains_kernel

        BACKEND = "cython"
    except ImportError:
        from ._pykernels import contains as _contains_kernel

        BACKEND = "python"


class Permutation:
    """An immutable permutation of 1..n stored in one-line form.

    The empty permutation is allowed and is the identity of both sums.
    """

    __slots__ = ("_e", "_hash")

    def __init__(self, entries: Iterable[int] = ()):
        e = tuple(int(x) for x in entries)
        if sorted(e) != list(range(1, len(e) + 1)):
            raise ValueError(f"not a permutation of 1..{len(e)}: {e}")
        self._e = e
        self._hash = hash(e)

    @classmethod
    def _trusted(cls, entries: tuple) -> "Permutation":
        obj = cls.__new__(cls)
        obj._e = entries
        obj._hash = hash(entries)
        return obj

    @classmethod
    def parse(cls, text: str) -> "Permutation":
        """Accept either contiguous digits ("2315746") or space-separated ranks."""
        text = text.strip()
        if text in ("", "e", "ε"):
            return cls(())
        if " " in text or "," in text:
            return cls(int(tok) for tok in text.replace(",", " ").split())
        return cls(int(ch) for ch in text)

    @property
    def entries(self) -> tuple:
        return self._e

    def __len__(self) -> int:
        return len(self._e)

    def __iter__(self) -> Iterator[int]:
        return iter(self._e)

    def __getitem__(self, i):
        return self._e[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self._e == other._e

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "Permutation") -> bool:
        return (len(self._e), self._e) < (len(other._e), other._e)

    def __str__(self) -> str:
        if len(self._e) <= 9:
            return "".join(map(str, self._e))
        return " ".join(map(str, self._e))

    def __repr__(self) -> str:
        return f"Permutation({str(self)!r})"

    def __add__(self, other: "Permutation") -> "Permutation":
        return direct_sum(self, other)


def as_perm(p) -> Permutation:
    if isinstance(p, Permutation):
        return p
    if isinstance(p, str):
        return Permutation.parse(p)
    return Permutation(p)


def standardize(seq: Sequence[int]) -> Permutation:
    """Relabel a sequence of distinct numbers by relative value."""
    order = sorted(range(len(seq)), key=seq.__getitem__)
    out = [0] * len(seq)
    for rank, i in enumerate(order, 1):
        out[i] = rank
    return Permutation._trusted(tuple(out))


@lru_cache(maxsize=1 << 18)
def _contains_cached(pattern: tuple, text: tuple) -> bool:
    return _contains_kernel(pattern, text)


def contains(pattern, text) -> bool:
    """True iff ``text`` contains ``pattern`` (some subsequence relabels to it)."""
    p = as_perm(pattern).entries
    t = as_perm(text).entries
    if len(p) > len(t):
        return False
    if len(p) == len(t):
        return p == t
    return _contains_cached(p, t)


def avoids(text, basis: Iterable) -> bool:
    return not any(contains(b, text) for b in basis)


def direct_sum(*perms) -> Permutation:
    """alpha ⊕ beta ⊕ ...: each later block is shifted up by the sizes before it."""
    out: list[int] = []
    for p in perms:
        shift = len(out)
        out.extend(x + shift for x in as_perm(p))
    return Permutation._trusted(tuple(out))


def skew_sum(*perms) -> Permutation:
    """alpha ⊖ beta ⊖ ...: each earlier block is shifted up by the sizes after it."""
    perms = [as_perm(p) for p in perms]
    remaining = sum(len(p) for p in perms)
    out: list[int] = []
    for p in perms:
        remaining -= len(p)
        out.extend(x + remaining for x in p)
    return Permutation._trusted(tuple(out))


@lru_cache(maxsize=1 << 16)
def _decompose(e: tuple) -> tuple:
    parts = []
    start = 0
    running_max = 0
    for i, v in enumerate(e, 1):
        if v > running_max:
            running_max = v
        if running_max == i:
            parts.append(Permutation._trusted(tuple(x - start for x in e[start:i])))
            start = i
    return tuple(parts)


def sum_decompose(pi) -> tuple:
    """Split into sum-indecomposable components, cutting where the prefix maximum equals the length."""
    return _decompose(as_perm(pi).entries)


def is_sum_indecomposable(pi) -> bool:
    pi = as_perm(pi)
    if len(pi) == 0:
        raise ValueError("sum-indecomposability is undefined for the empty permutation")
    return len(sum_decompose(pi)) == 1


def reverse(pi) -> Permutation:
    return Permutation._trusted(as_perm(pi).entries[::-1])


def complement(pi) -> Permutation:
    e = as_perm(pi).entries
    n = len(e)
    return Permutation._trusted(tuple(n + 1 - v for v in e))


def inverse(pi) -> Permutation:
    e = as_perm(pi).entries
    out = [0] * len(e)
    for pos, v in enumerate(e, 1):
        out[v - 1] = pos
    return Permutation._trusted(tuple(out))


_BASIC = {"reverse": reverse, "complement": complement, "inverse": inverse}

# The eight dihedral symmetries, each as a sequence of basic maps applied left to right.
DIHEDRAL = {
    "id": (),
    "r": ("reverse",),
    "c": ("complement",),
    "i": ("inverse",),
    "rc": ("reverse", "complement"),
    "ri": ("reverse", "inverse"),
    "ci": ("complement", "inverse"),
    "rci": ("reverse", "complement", "inverse"),
}


def apply_symmetry(pi, op) -> Permutation:
    """Apply a basic symmetry, a dihedral name from ``DIHEDRAL``, or a sequence of basic maps.

    Sequences are applied left to right, so ``("complement", "reverse")`` is reverse∘complement.
    """
    pi = as_perm(pi)
    if isinstance(op, str):
        ops = (op,) if op in _BASIC else DIHEDRAL[op]
    else:
        ops = tuple(op)
    for name in ops:
        pi = _BASIC[name](pi)
    return pi


def deletions(pi) -> set:
    """All distinct permutations obtained by deleting one entry and relabelling."""
    e = as_perm(pi).entries
    if not e:
        raise ValueError("cannot delete from the empty permutation")
    out = set()
    for i, v in enumerate(e):
        out.add(Permutation._trusted(tuple(x - (x > v) for x in e[:i] + e[i + 1:])))
    return out


def one_point_extensions(pi) -> set:
    """All permutations of size n+1 having ``pi`` as a one-point deletion."""
    e = as_perm(pi).entries
    n = len(e)
    out = set()
    for v in range(1, n + 2):
        shifted = [x + (x >= v) for x in e]
        for pos in range(n + 1):
            out.add(Permutation._trusted(tuple(shifted[:pos] + [v] + shifted[pos:])))
    return out


def permutations_of(n: int) -> Iterator[Permutation]:
    for t in itertools.permutations(range(1, n + 1)):
        yield Permutation._trusted(t)
