"""Weighted alphabets, words, and the embedding order with greedy containment.

Two letter-containment oracles are supported. In ``"permutation"`` mode letters are
sum-indecomposable permutations and a word embeds in a letter when the sum of its
letters is a pattern of that letter. In ``"subword"`` mode letters are abstract
names forming an antichain, so a word embeds in a letter only if it is empty or
equal to that letter.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

from .perm import Permutation, as_perm, contains, direct_sum, is_sum_indecomposable, sum_decompose
from .series import TruncatedSeries

PERMUTATION = "permutation"
SUBWORD = "subword"


@dataclass(frozen=True)
class Letter:
    payload: object  # Permutation or str
    weight: int

    def __post_init__(self):
        if self.weight < 1:
            raise ValueError(f"letter weight must be positive, got {self.weight}")

    @property
    def key(self):
        return (self.weight, str(self.payload))

    def __str__(self) -> str:
        return str(self.payload)

    def __repr__(self) -> str:
        return f"Letter({self.payload!s}/{self.weight})"


class Word(tuple):
    """A finite sequence of letters; slicing and concatenation stay ``Word``."""

    def __new__(cls, letters: Iterable[Letter] = ()):
        return super().__new__(cls, letters)

    @property
    def weight(self) -> int:
        return sum(a.weight for a in self)

    def __getitem__(self, i):
        r = tuple.__getitem__(self, i)
        return Word(r) if isinstance(i, slice) else r

    def __add__(self, other) -> "Word":
        return Word(tuple.__add__(self, tuple(other)))

    def __str__(self) -> str:
        return ".".join(str(a) for a in self) if self else "ε"

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"

    def perm(self) -> Permutation:
        """The permutation ⊕ of the payloads (permutation letters only)."""
        return direct_sum(*(a.payload for a in self))

    @property
    def first(self) -> Letter:
        return self[0]

    @property
    def last(self) -> Letter:
        return self[-1]


EMPTY = Word()


class Alphabet:
    """A finite weighted alphabet with one of the two containment oracles."""

    def __init__(self, letters: Iterable[Letter], mode: str = PERMUTATION):
        if mode not in (PERMUTATION, SUBWORD):
            raise ValueError(f"unknown alphabet mode {mode!r}")
        letters = list(letters)
        if len(set(letters)) != len(letters):
            raise ValueError("alphabet letters must be pairwise distinct")
        if mode == PERMUTATION:
            for a in letters:
                if not isinstance(a.payload, Permutation):
                    raise TypeError(f"permutation alphabet needs permutation letters, got {a!r}")
                if a.weight != len(a.payload) or not is_sum_indecomposable(a.payload):
                    raise ValueError(f"{a.payload} is not a valid sum-indecomposable letter")
        else:
            names = [str(a.payload) for a in letters]
            if len(set(names)) != len(names):
                raise ValueError("abstract letter names must be distinct")
        self.mode = mode
        self.letters: tuple[Letter, ...] = tuple(sorted(letters, key=lambda a: a.key))
        self._set = frozenset(self.letters)
        self._by_name = {str(a.payload): a for a in self.letters}
        self._leq_cache: dict = {}
        self._words_by_weight: list[list[Word]] = [[EMPTY]]

    @classmethod
    def from_permutations(cls, perms: Iterable) -> "Alphabet":
        letters = []
        for p in perms:
            p = as_perm(p)
            letters.append(Letter(p, len(p)))
        return cls(letters, PERMUTATION)

    @classmethod
    def abstract(cls, spec: Iterable) -> "Alphabet":
        """``spec`` holds names (unit weight) or ``(name, weight)`` pairs."""
        letters = []
        for item in spec:
            if isinstance(item, str):
                letters.append(Letter(item, 1))
            else:
                name, weight = item
                letters.append(Letter(str(name), int(weight)))
        return cls(letters, SUBWORD)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __contains__(self, a) -> bool:
        return a in self._set

    def __repr__(self) -> str:
        return f"Alphabet({{{', '.join(map(str, self.letters))}}}, mode={self.mode!r})"

    @property
    def max_weight(self) -> int:
        return max((a.weight for a in self.letters), default=0)

    def letter(self, name) -> Letter:
        try:
            return self._by_name[str(name)]
        except KeyError:
            raise KeyError(f"no letter {name!s} in {self!r}") from None

    def parse_word(self, text: str) -> Word:
        """Parse the dotted form, e.g. ``"21.1.21"`` or ``"a.b.c"``; ``""``/``"ε"`` is empty."""
        text = text.strip()
        if text in ("", "ε", "e"):
            return EMPTY
        if self.mode == PERMUTATION:
            return Word(self.letter(str(as_perm(tok))) for tok in text.split("."))
        return Word(self.letter(tok) for tok in text.split("."))

    def word_of(self, pi) -> Word:
        """Sum decomposition of a permutation as a word over this alphabet."""
        if self.mode != PERMUTATION:
            raise TypeError("word_of needs a permutation alphabet")
        out = []
        for comp in sum_decompose(as_perm(pi)):
            a = self._by_name.get(str(comp))
            if a is None:
                raise ValueError(f"component {comp} of {pi} is not a letter of {self!r}")
            out.append(a)
        return Word(out)

    def check(self, *words: Sequence[Letter]) -> None:
        for w in words:
            for a in w:
                if a not in self._set:
                    raise ValueError(f"letter {a!r} does not belong to {self!r}")

    # -- containment -------------------------------------------------------

    def letter_leq(self, piece: Sequence[Letter], b: Letter) -> bool:
        """Does the word ``piece`` embed into the single letter ``b``?"""
        if not piece:
            return True
        key = (tuple(piece), b)
        hit = self._leq_cache.get(key)
        if hit is not None:
            return hit
        if self.mode == PERMUTATION:
            w = sum(a.weight for a in piece)
            if w > b.weight:
                res = False
            elif len(piece) == 1:
                res = contains(piece[0].payload, b.payload)
            else:
                res = contains(direct_sum(*(a.payload for a in piece)), b.payload)
        else:
            res = len(piece) == 1 and piece[0] == b
        self._leq_cache[key] = res
        return res

    def advance(self, target: Sequence[Letter], j: int, b: Letter) -> int:
        """Longest m >= j such that target[j:m] embeds into ``b``."""
        m = j
        end = len(target)
        while m < end and self.letter_leq(target[j:m + 1], b):
            m += 1
        return m

    def retreat(self, target: Sequence[Letter], s: int, b: Letter) -> int:
        """Suffix analogue of ``advance``: grow an embedded suffix of length s by prepending ``b``."""
        ell = len(target)
        stop = ell - s
        m = s
        while m < ell and self.letter_leq(target[ell - m - 1:stop], b):
            m += 1
        return m

    def leq(self, w: Sequence[Letter], v: Sequence[Letter]) -> bool:
        """Embedding order by greedy scan: strip the longest embeddable prefix into each letter of v."""
        self.check(w, v)
        n = len(w)
        j = 0
        for b in v:
            if j == n:
                break
            j = self.advance(w, j, b)
        return j == n

    def leq_star(self, w: Sequence[Letter], v: Sequence[Letter]) -> bool:
        """``v`` is a minimal container of ``w``."""
        if not v:
            self.check(w)
            return not w
        return self.leq(w, v) and not self.leq(w, v[:-1])

    def incompatible(self, a: Letter, b: Letter) -> bool:
        """No letter c of the alphabet contains the two-letter word ab."""
        self.check((a, b))
        return not any(self.letter_leq((a, b), c) for c in self.letters)

    # -- enumeration -------------------------------------------------------

    def words_of_weight(self, n: int) -> list[Word]:
        table = self._words_by_weight
        while len(table) <= n:
            m = len(table)
            row = []
            for a in self.letters:
                if a.weight <= m:
                    row.extend(w + (a,) for w in table[m - a.weight])
            table.append(row)
        return table[n]

    def words_up_to(self, n: int) -> Iterator[Word]:
        for m in range(n + 1):
            yield from self.words_of_weight(m)

    def series_A(self, cutoff: int) -> TruncatedSeries:
        return TruncatedSeries.monomial_sum((a.weight for a in self.letters), cutoff)

    def series_A_star(self, cutoff: int) -> TruncatedSeries:
        return (TruncatedSeries.one(cutoff) - self.series_A(cutoff)).reciprocal()


def series_A(alphabet: Alphabet, cutoff: int) -> TruncatedSeries:
    return alphabet.series_A(cutoff)


def _progress_counts(alphabet: Alphabet, w: Word, cutoff: int):
    """Weighted counts over the greedy progress states 0..len(w).

    Returns (I, I_star) coefficient lists.
    """
    ell = len(w)
    trans = [[(b.weight, alphabet.advance(w, j, b)) for b in alphabet.letters] for j in range(ell)]
    f = [[0] * (ell + 1) for _ in range(cutoff + 1)]
    f[0][0] = 1
    star = [0] * (cutoff + 1)
    total_letters = [b.weight for b in alphabet.letters]
    for n in range(cutoff + 1):
        row = f[n]
        for j in range(ell):
            cnt = row[j]
            if not cnt:
                continue
            for wt, nj in trans[j]:
                if n + wt <= cutoff:
                    f[n + wt][nj] += cnt
                    if nj == ell:
                        star[n + wt] += cnt
        if ell == 0:
            continue
        cnt = row[ell]
        if cnt:
            for wt in total_letters:
                if n + wt <= cutoff:
                    f[n + wt][ell] += cnt
    if ell == 0:
        # every word contains ε; only ε is a minimal container
        full = alphabet.series_A_star(cutoff).coeffs
        return list(full), [1] + [0] * cutoff
    return [f[n][ell] for n in range(cutoff + 1)], star


def _check_cutoff(w: Word, cutoff: int):
    if w.weight > cutoff:
        raise ValueError(f"cutoff {cutoff} is below weight({w}) = {w.weight}")


def series_I(alphabet: Alphabet, w: Sequence[Letter], cutoff: int, method: str = "dp") -> TruncatedSeries:
    """Generating function of the containers of ``w`` by weight."""
    w = Word(w)
    alphabet.check(w)
    _check_cutoff(w, cutoff)
    if method == "dp":
        return TruncatedSeries(_progress_counts(alphabet, w, cutoff)[0], cutoff)
    if method == "enumerate":
        c = [0] * (cutoff + 1)
        for v in alphabet.words_up_to(cutoff):
            if alphabet.leq(w, v):
                c[v.weight] += 1
        return TruncatedSeries(c, cutoff)
    raise ValueError(f"unknown method {method!r}")


def series_I_star(alphabet: Alphabet, w: Sequence[Letter], cutoff: int, method: str = "dp") -> TruncatedSeries:
    """Generating function of the minimal containers of ``w`` by weight."""
    w = Word(w)
    alphabet.check(w)
    _check_cutoff(w, cutoff)
    if method == "dp":
        return TruncatedSeries(_progress_counts(alphabet, w, cutoff)[1], cutoff)
    if method == "enumerate":
        c = [0] * (cutoff + 1)
        for v in alphabet.words_up_to(cutoff):
            if alphabet.leq_star(w, v):
                c[v.weight] += 1
        return TruncatedSeries(c, cutoff)
    raise ValueError(f"unknown method {method!r}")


def check_quotient_identity(alphabet: Alphabet, w: Sequence[Letter], cutoff: int, method: str = "enumerate") -> bool:
    """I_W == I*_W / (1 - A) through ``cutoff``."""
    lhs = series_I(alphabet, w, cutoff, method)
    rhs = series_I_star(alphabet, w, cutoff, method) * alphabet.series_A_star(cutoff)
    return lhs == rhs


def split_at(w: Sequence[Letter], cuts: Sequence[int]) -> list[Word]:
    """Cut ``w`` after each listed position (1-based letter counts)."""
    w = Word(w)
    bounds = [0, *cuts, len(w)]
    parts = []
    for lo, hi in zip(bounds, bounds[1:]):
        if hi <= lo:
            raise ValueError(f"cuts {list(cuts)} produce an empty part of {w}")
        parts.append(w[lo:hi])
    return parts


def parts_incompatible(alphabet: Alphabet, parts: Sequence[Sequence[Letter]]) -> bool:
    for x, y in zip(parts, parts[1:]):
        if not x or not y:
            raise ValueError("factorisation parts must be nonempty")
        if not alphabet.incompatible(x[-1], y[0]):
            return False
    return True


def is_incompatible_factorisation(alphabet: Alphabet, w: Sequence[Letter], cuts: Sequence[int]) -> bool:
    return parts_incompatible(alphabet, split_at(w, cuts))


def check_factorisation_identity(alphabet: Alphabet, w: Sequence[Letter], cuts: Sequence[int],
                                 cutoff: int, method: str = "enumerate") -> bool:
    """I_W == prod I*_{W_i} / (1 - A) for an incompatible factorisation."""
    parts = split_at(w, cuts)
    if not parts_incompatible(alphabet, parts):
        raise ValueError(f"{Word(w)} cut at {list(cuts)} is not an incompatible factorisation")
    rhs = alphabet.series_A_star(cutoff)
    for part in parts:
        rhs = rhs * series_I_star(alphabet, part, cutoff, method)
    return series_I(alphabet, w, cutoff, method) == rhs


def shuffle_orbit(alphabet: Alphabet, parts: Sequence[Sequence[Letter]]) -> set:
    """All incompatible rearrangements of an incompatible factorisation, as words."""
    parts = [Word(p) for p in parts]
    if not parts_incompatible(alphabet, parts):
        raise ValueError("the given parts do not form an incompatible factorisation")
    out = set()
    seen = set()
    for order in itertools.permutations(range(len(parts))):
        arranged = tuple(parts[i] for i in order)
        if arranged in seen:
            continue
        seen.add(arranged)
        if parts_incompatible(alphabet, arranged):
            out.add(Word(itertools.chain.from_iterable(arranged)))
    return out


@dataclass
class OrderReport:
    ok: bool
    checked_pairs: int
    axiom: str | None = None
    counterexample: tuple = field(default=())

    def __str__(self) -> str:
        if self.ok:
            return f"embedding order verified on {self.checked_pairs} pairs"
        return f"{self.axiom} fails at {tuple(map(str, self.counterexample))}"


def validate_embedding_order(alphabet: Alphabet, max_weight: int,
                             letter_leq: Callable[[Sequence[Letter], Letter], bool] | None = None,
                             check_transitivity: bool = True) -> OrderReport:
    """Brute-force check of the embedding-order axioms on all words up to ``max_weight``.

    The greedy comparison is checked against the factorisation definition computed
    independently by a reachability scan. ``letter_leq`` overrides the alphabet's
    letter oracle (used for negative controls).
    """
    oracle = letter_leq or alphabet.letter_leq

    def greedy(w, v):
        j, n = 0, len(w)
        for b in v:
            m = j
            while m < n and oracle(w[j:m + 1], b):
                m += 1
            j = m
        return j == n

    def by_factorisation(w, v):
        n = len(w)
        reach = {0}
        for b in v:
            nxt = set()
            for j in reach:
                for m in range(j, n + 1):
                    if oracle(w[j:m], b):
                        nxt.add(m)
            reach = nxt
            if not reach:
                return False
        return n in reach

    words = list(alphabet.words_up_to(max_weight))
    rel = {}
    checked = 0
    for w in words:
        if not greedy(EMPTY, w):
            return OrderReport(False, checked, "ε ≤ W", (EMPTY, w))
        if not greedy(w, w):
            return OrderReport(False, checked, "reflexivity", (w, w))
    for w in words:
        for v in words:
            checked += 1
            g = greedy(w, v)
            if g != by_factorisation(w, v):
                return OrderReport(False, checked, "factorisation axiom", (w, v))
            if g and w != v and not w.weight < v.weight:
                return OrderReport(False, checked, "strict containment lowers weight", (w, v))
            rel[w, v] = g
    if check_transitivity:
        ups = {w: [v for v in words if rel[w, v]] for w in words}
        for u in words:
            for v in ups[u]:
                for w in ups[v]:
                    if not rel[u, w]:
                        return OrderReport(False, checked, "transitivity", (u, v, w))
    return OrderReport(True, checked)


def count_disjoint_blocks(w: Sequence[Letter], pattern: Sequence[Letter]) -> int:
    """Maximum number of pairwise disjoint consecutive occurrences of ``pattern`` in ``w``.

    The greedy left-to-right scan is optimal for disjoint intervals of equal length.
    """
    k = len(pattern)
    if k == 0:
        raise ValueError("pattern must be nonempty")
    w = tuple(w)
    pattern = tuple(pattern)
    count = 0
    i = 0
    last = len(w) - k
    while i <= last:
        if w[i:i + k] == pattern:
            count += 1
            i += k
        else:
            i += 1
    return count
