"""Exact integer power series truncated at a fixed degree."""

from __future__ import annotations

from typing import Iterable


class TruncatedSeries:
    """Coefficients of x^0..x^N as Python integers.

    Arithmetic between two series is exact through the smaller cutoff.
    """

    __slots__ = ("cutoff", "coeffs")

    def __init__(self, coeffs: Iterable[int], cutoff: int | None = None):
        c = [int(x) for x in coeffs]
        if cutoff is None:
            cutoff = len(c) - 1
        if cutoff < 0:
            raise ValueError("cutoff must be non-negative")
        c = (c + [0] * (cutoff + 1))[: cutoff + 1]
        self.cutoff = cutoff
        self.coeffs = tuple(c)

    @classmethod
    def zero(cls, cutoff: int) -> "TruncatedSeries":
        return cls([], cutoff)

    @classmethod
    def one(cls, cutoff: int) -> "TruncatedSeries":
        return cls([1], cutoff)

    @classmethod
    def monomial_sum(cls, degrees: Iterable[int], cutoff: int) -> "TruncatedSeries":
        c = [0] * (cutoff + 1)
        for d in degrees:
            if d <= cutoff:
                c[d] += 1
        return cls(c, cutoff)

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i]

    def __len__(self) -> int:
        return self.cutoff + 1

    def __iter__(self):
        return iter(self.coeffs)

    def _common(self, other: "TruncatedSeries") -> int:
        return min(self.cutoff, other.cutoff)

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        n = self._common(other)
        return TruncatedSeries([self.coeffs[i] + other.coeffs[i] for i in range(n + 1)], n)

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        n = self._common(other)
        return TruncatedSeries([self.coeffs[i] - other.coeffs[i] for i in range(n + 1)], n)

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries([-x for x in self.coeffs], self.cutoff)

    def __mul__(self, other) -> "TruncatedSeries":
        if isinstance(other, int):
            return TruncatedSeries([x * other for x in self.coeffs], self.cutoff)
        n = self._common(other)
        a, b = self.coeffs, other.coeffs
        out = [0] * (n + 1)
        for i in range(n + 1):
            ai = a[i]
            if ai:
                for j in range(n + 1 - i):
                    out[i + j] += ai * b[j]
        return TruncatedSeries(out, n)

    __rmul__ = __mul__

    def reciprocal(self) -> "TruncatedSeries":
        """1/f for a series with constant term 1."""
        if self.coeffs[0] != 1:
            raise ValueError("reciprocal requires constant term 1")
        a = self.coeffs
        out = [0] * (self.cutoff + 1)
        out[0] = 1
        for n in range(1, self.cutoff + 1):
            out[n] = -sum(a[i] * out[n - i] for i in range(1, n + 1))
        return TruncatedSeries(out, self.cutoff)

    def __truediv__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return self * other.reciprocal()

    def truncate(self, cutoff: int) -> "TruncatedSeries":
        return TruncatedSeries(self.coeffs, min(cutoff, self.cutoff))

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.cutoff == other.cutoff and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self) -> str:
        terms = [f"{c}x^{i}" for i, c in enumerate(self.coeffs) if c]
        return f"TruncatedSeries({' + '.join(terms) or '0'}; O(x^{self.cutoff + 1}))"

    def csv_rows(self):
        yield ("degree", "coefficient")
        for i, c in enumerate(self.coeffs):
            yield (i, c)
