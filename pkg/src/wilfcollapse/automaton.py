"""Prefix/suffix-state automaton for classes with finitely many sum-indecomposables.

A class is encoded as the words over its alphabet of indecomposables that avoid a
finite set F of forbidden words. A prefix state records, for every forbidden word,
the length of its longest prefix embedded so far; suffix states mirror this from
the right. The states form a DAG with loops, and the loop alphabets drive growth
rates, dominance, and the structural notions used for Wilf-equivalence moves.
"""

from __future__ import annotations

import heapq
import itertools
import json
import logging
import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .perm import (
    Permutation,
    as_perm,
    avoids,
    contains,
    deletions,
    is_sum_indecomposable,
    one_point_extensions,
    sum_decompose,
)
from .series import TruncatedSeries
from .words import EMPTY, PERMUTATION, Alphabet, Letter, Word, count_disjoint_blocks

log = logging.getLogger(__name__)

State = tuple


class ClassSpecError(ValueError):
    """The class description is malformed or describes something we cannot build."""


class AlphabetNotFinite(ClassSpecError):
    pass


class NotInClassError(ValueError):
    def __init__(self, word, position: int):
        self.word = word
        self.position = position
        super().__init__(f"{word} leaves the class at letter {position}")


class LemmaViolation(AssertionError):
    """A structural fact that must hold for every class was observed to fail."""


# -- growth of loop languages ---------------------------------------------------


def _weights_of(loop) -> list[int]:
    return [a.weight if isinstance(a, Letter) else int(a) for a in loop]


def _one_minus_root(weights: Sequence[int], tol: float = 1e-12) -> float:
    """Unique root of 1 - sum x^w on (0, 1] by bisection (the function is decreasing)."""

    def f(x):
        return 1.0 - math.fsum(x ** w for w in weights)

    if f(1.0) >= 0.0:
        return 1.0
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class Growth:
    rho: float
    gamma: float
    c: float


def growth(loop, require_unit_letter: bool = True) -> Growth:
    """Growth data of the free monoid over a finite weighted alphabet.

    ``rho`` is the positive root of 1 - L(x), ``gamma = 1/rho``, and ``c`` the
    constant with |L*_n| ~ c * gamma^n from the simple pole at ``rho``.
    An empty alphabet gives ``rho = inf`` and ``gamma = c = 0``.
    """
    weights = _weights_of(loop)
    if not weights:
        return Growth(math.inf, 0.0, 0.0)
    if require_unit_letter and 1 not in weights:
        raise ValueError("loop alphabet has no letter of weight 1")
    rho = _one_minus_root(weights)
    deriv = math.fsum(w * rho ** (w - 1) for w in weights)
    return Growth(rho, 1.0 / rho, 1.0 / (rho * deriv))


def loop_word_counts(loop, n: int) -> list[int]:
    """Exact |L*_m| for m = 0..n."""
    weights = _weights_of(loop)
    out = [0] * (n + 1)
    out[0] = 1
    for m in range(1, n + 1):
        out[m] = sum(out[m - w] for w in weights if w <= m)
    return out


# -- decompositions ---------------------------------------------------------------


@dataclass(frozen=True)
class Decomposition:
    """Loop blocks and transition letters of a word along its transition path.

    For the suffix side, block 0 is the rightmost block and the path is read
    right to left, as in the word scanned from its end.
    """

    word: Word
    side: str
    blocks: tuple
    transitions: tuple
    positions: tuple  # 0-based index of each transition letter in ``word``
    path: tuple
    spans: tuple  # (start, end) index range of each block in ``word``

    @property
    def k(self) -> int:
        return len(self.transitions)

    def reassemble(self) -> Word:
        out: list = []
        if self.side == "prefix":
            for j, block in enumerate(self.blocks):
                if j:
                    out.append(self.transitions[j - 1])
                out.extend(block)
        else:
            for j in range(len(self.blocks) - 1, -1, -1):
                out.extend(self.blocks[j])
                if j:
                    out.append(self.transitions[j - 1])
        return Word(out)

    def is_large(self, j: int, K: int, Q: int) -> bool:
        return len(self.blocks[j]) >= 2 * K * Q + 1

    def central_span(self, j: int, K: int, Q: int) -> tuple[int, int]:
        """Index range in ``word`` of the letters with at least KQ block letters on each side."""
        lo, hi = self.spans[j]
        return lo + K * Q, max(lo + K * Q, hi - K * Q)

    def block_at(self, index: int) -> int:
        for j, (lo, hi) in enumerate(self.spans):
            if lo <= index < hi:
                return j
        raise IndexError(f"position {index} is a transition letter")


@dataclass(frozen=True)
class Dominance:
    gamma: float
    D: int
    prefix_dominant: frozenset
    suffix_dominant: frozenset
    gamma_suffix: float
    D_suffix: int

    @property
    def consistent(self) -> bool:
        return abs(self.gamma - self.gamma_suffix) <= 1e-9 and self.D == self.D_suffix


@dataclass
class EquitablePartition:
    word: Word
    Q: int
    bounds: list  # Q+1 cut indices
    free: list  # per slice

    def slice(self, j: int) -> Word:
        """The j-th slice, 1-based."""
        return self.word[self.bounds[j - 1]:self.bounds[j]]

    def longest_free_run(self) -> int:
        best = run = 0
        for f in self.free:
            run = run + 1 if f else 0
            best = max(best, run)
        return best


@dataclass
class TypicalityReport:
    typical: bool
    n: int
    threshold: int
    free_slices: list
    failures: list = field(default_factory=list)  # (slice, condition, detail)

    def failed_conditions(self) -> set:
        return {c for _, c, _ in self.failures}


# -- the model ------------------------------------------------------------------


class ClassModel:
    """Alphabet, forbidden words, and the reachable prefix/suffix state graphs."""

    def __init__(self, alphabet: Alphabet, forbidden: Iterable[Sequence[Letter]] = (),
                 basis: Sequence[Permutation] | None = None, kind: str = "alphabet"):
        self.alphabet = alphabet
        self.forbidden = tuple(Word(f) for f in forbidden)
        self.basis = tuple(basis) if basis is not None else None
        self.kind = kind
        for phi in self.forbidden:
            if not phi:
                raise ClassSpecError("a forbidden word cannot be empty")
            alphabet.check(phi)
        for x, y in itertools.permutations(self.forbidden, 2):
            if alphabet.leq(x, y):
                raise ClassSpecError(f"forbidden words are not an antichain: {x} <= {y}")
        self.lengths = tuple(len(phi) for phi in self.forbidden)
        self._pdelta: dict = {}
        self._sdelta: dict = {}
        self.initial = (0,) * len(self.forbidden)
        self.prefix_states, self.prefix_witness = self._explore(self.prefix_transition, prepend=False)
        self.suffix_states, self.suffix_witness = self._explore(self.suffix_transition, prepend=True)
        self._pset = frozenset(self.prefix_states)
        self._sset = frozenset(self.suffix_states)
        self.prefix_loops = {p: frozenset(a for a in alphabet if self.prefix_transition(p, a) == p)
                             for p in self.prefix_states}
        self.suffix_loops = {s: frozenset(a for a in alphabet if self.suffix_transition(s, a) == s)
                             for s in self.suffix_states}
        for loops in (self.prefix_loops, self.suffix_loops):
            for st, loop in loops.items():
                if not self._is_down_set(loop):
                    raise LemmaViolation(f"loop alphabet of {st} is not a down-set")

    def __repr__(self) -> str:
        return (f"ClassModel({self.kind}, A={{{', '.join(map(str, self.alphabet))}}}, "
                f"F={{{', '.join(map(str, self.forbidden))}}}, |P|={len(self.prefix_states)}, "
                f"|S|={len(self.suffix_states)})")

    @property
    def sum_closed(self) -> bool:
        return not self.forbidden

    @property
    def K(self) -> int:
        return self.alphabet.max_weight

    @property
    def Q(self) -> int:
        return 3 * (len(self.prefix_states) + len(self.suffix_states))

    def _is_down_set(self, loop) -> bool:
        if self.alphabet.mode != PERMUTATION:
            return True
        for a in loop:
            for b in self.alphabet:
                if b not in loop and b.weight <= a.weight and contains(b.payload, a.payload):
                    return False
        return True

    def is_valid(self, state: State) -> bool:
        return all(x < ell for x, ell in zip(state, self.lengths))

    def _explore(self, step, prepend: bool):
        """Reachable valid states, each with a minimum-weight witness word."""
        init = self.initial
        best = {init: (0, EMPTY)}
        heap = [(0, 0, init)]
        tick = itertools.count(1)
        done = set()
        while heap:
            w, _, st = heapq.heappop(heap)
            if st in done:
                continue
            done.add(st)
            word = best[st][1]
            for a in self.alphabet:
                nxt = step(st, a)
                if not self.is_valid(nxt):
                    continue
                nw = w + a.weight
                if nxt not in best or nw < best[nxt][0]:
                    best[nxt] = (nw, Word((a,)) + word if prepend else word + (a,))
                    heapq.heappush(heap, (nw, next(tick), nxt))
        states = sorted(best, key=lambda s: (sum(s), s))
        return states, {s: best[s][1] for s in states}

    # -- transitions --------------------------------------------------------

    def prefix_transition(self, p: State, a: Letter) -> State:
        key = (p, a)
        hit = self._pdelta.get(key)
        if hit is not None:
            return hit
        if not self.is_valid(p):
            raise ValueError(f"prefix state {p} is not valid")
        q = tuple(self.alphabet.advance(phi, pi, a) for phi, pi in zip(self.forbidden, p))
        self._pdelta[key] = q
        return q

    def suffix_transition(self, s: State, a: Letter) -> State:
        key = (s, a)
        hit = self._sdelta.get(key)
        if hit is not None:
            return hit
        if not self.is_valid(s):
            raise ValueError(f"suffix state {s} is not valid")
        q = tuple(self.alphabet.retreat(phi, si, a) for phi, si in zip(self.forbidden, s))
        self._sdelta[key] = q
        return q

    def prefix_state(self, word: Sequence[Letter]) -> State:
        p = self.initial
        for i, a in enumerate(word):
            p = self.prefix_transition(p, a)
            if not self.is_valid(p):
                return p
        return p

    def suffix_state(self, word: Sequence[Letter]) -> State:
        s = self.initial
        for a in reversed(word):
            s = self.suffix_transition(s, a)
            if not self.is_valid(s):
                return s
        return s

    def contains_word(self, word: Sequence[Letter]) -> bool:
        """Membership in the class: the prefix state stays valid."""
        self.alphabet.check(word)
        return self.is_valid(self.prefix_state(word))

    def contains_perm(self, pi) -> bool:
        if self.alphabet.mode != PERMUTATION:
            raise TypeError("contains_perm needs a permutation class")
        try:
            w = self.alphabet.word_of(pi)
        except ValueError:
            return False
        return self.contains_word(w)

    def loop_alphabet(self, state: State, side: str = "prefix") -> frozenset:
        loops = self.prefix_loops if side == "prefix" else self.suffix_loops
        if state not in loops:
            raise KeyError(f"{state} is not a reachable {side} state")
        return loops[state]

    def successors(self, state: State, side: str = "prefix") -> set:
        """Reachable states other than ``state`` obtained by one letter."""
        step = self.prefix_transition if side == "prefix" else self.suffix_transition
        valid = self._pset if side == "prefix" else self._sset
        out = set()
        for a in self.alphabet:
            q = step(state, a)
            if q != state and q in valid:
                out.add(q)
        return out

    def _all_successors(self, state: State, side: str) -> set:
        step = self.prefix_transition if side == "prefix" else self.suffix_transition
        return {q for q in (step(state, a) for a in self.alphabet) if q != state}

    # -- overlap and matching ---------------------------------------------

    def overlap(self, p: State, s: State) -> bool:
        return any(x + y >= ell for x, y, ell in zip(p, s, self.lengths))

    def compatible(self, p: State, s: State) -> bool:
        return not self.overlap(p, s)

    def match(self, p: State, s: State) -> bool:
        if self.overlap(p, s):
            return False
        if any(not self.overlap(q, s) for q in self._all_successors(p, "prefix")):
            return False
        if any(not self.overlap(p, r) for r in self._all_successors(s, "suffix")):
            return False
        if self.prefix_loops.get(p) != self.suffix_loops.get(s):
            raise LemmaViolation(f"matching states {p}, {s} have different loop alphabets")
        return True

    # -- decompositions ---------------------------------------------------

    def prefix_decomposition(self, word: Sequence[Letter]) -> Decomposition:
        word = Word(word)
        self.alphabet.check(word)
        p = self.initial
        path, transitions, positions = [p], [], []
        for i, a in enumerate(word):
            q = self.prefix_transition(p, a)
            if not self.is_valid(q):
                raise NotInClassError(word, i + 1)
            if q != p:
                transitions.append(a)
                positions.append(i)
                path.append(q)
                p = q
        bounds = [-1, *positions, len(word)]
        spans = tuple((lo + 1, hi) for lo, hi in zip(bounds, bounds[1:]))
        blocks = tuple(word[lo:hi] for lo, hi in spans)
        return Decomposition(word, "prefix", blocks, tuple(transitions), tuple(positions), tuple(path), spans)

    def suffix_decomposition(self, word: Sequence[Letter]) -> Decomposition:
        word = Word(word)
        self.alphabet.check(word)
        s = self.initial
        path, transitions, positions = [s], [], []
        for i in range(len(word) - 1, -1, -1):
            a = word[i]
            q = self.suffix_transition(s, a)
            if not self.is_valid(q):
                raise NotInClassError(word, i + 1)
            if q != s:
                transitions.append(a)
                positions.append(i)
                path.append(q)
                s = q
        bounds = [len(word), *positions, -1]
        spans = tuple((lo + 1, hi) for hi, lo in zip(bounds, bounds[1:]))
        blocks = tuple(word[lo:hi] for lo, hi in spans)
        return Decomposition(word, "suffix", blocks, tuple(transitions), tuple(positions), tuple(path), spans)

    # -- growth and dominance ---------------------------------------------

    @cached_property
    def prefix_growth(self) -> dict:
        return {p: growth(loop, require_unit_letter=False) for p, loop in self.prefix_loops.items()}

    @cached_property
    def suffix_growth(self) -> dict:
        return {s: growth(loop, require_unit_letter=False) for s, loop in self.suffix_loops.items()}

    def _dominant_set(self, loops: dict, growths: dict):
        nonempty = [st for st in loops if loops[st]]
        if not nonempty:
            return 0.0, frozenset()
        gamma = max(growths[st].gamma for st in nonempty)
        sig = {st: tuple(sorted(a.weight for a in loops[st])) for st in nonempty}
        top = {sig[st] for st in nonempty if growths[st].gamma == gamma}
        dominant = set()
        for st in nonempty:
            if sig[st] in top:
                dominant.add(st)
            elif abs(growths[st].gamma - gamma) <= 1e-9:
                warnings.warn(f"state {st} treated as dominant by numeric growth-rate equality", stacklevel=3)
                dominant.add(st)
        return gamma, frozenset(dominant)

    def _max_dominant_on_path(self, states, dominant, side: str) -> int:
        best: dict = {}
        for st in sorted(states, key=lambda s: -sum(s)):
            here = 1 if st in dominant else 0
            best[st] = here + max((best[q] for q in self.successors(st, side)), default=0)
        return best[self.initial]

    @cached_property
    def dominance(self) -> Dominance:
        gp, dp = self._dominant_set(self.prefix_loops, self.prefix_growth)
        gs, ds = self._dominant_set(self.suffix_loops, self.suffix_growth)
        Dp = self._max_dominant_on_path(self.prefix_states, dp, "prefix")
        Ds = self._max_dominant_on_path(self.suffix_states, ds, "suffix")
        dom = Dominance(gp, Dp, dp, ds, gs, Ds)
        if not dom.consistent:
            raise LemmaViolation(f"prefix and suffix dominance disagree: {(gp, Dp)} vs {(gs, Ds)}")
        return dom

    @property
    def gamma(self) -> float:
        return self.dominance.gamma

    @property
    def D(self) -> int:
        return self.dominance.D

    @property
    def unbounded_polynomial(self) -> bool:
        return self.gamma == 1.0 and self.D > 1

    def dominant_count(self, decomposition: Decomposition) -> int:
        dom = self.dominance.prefix_dominant if decomposition.side == "prefix" else self.dominance.suffix_dominant
        return sum(1 for st in decomposition.path if st in dom)

    def dominant_block_indices(self, decomposition: Decomposition) -> list[int]:
        dom = self.dominance.prefix_dominant if decomposition.side == "prefix" else self.dominance.suffix_dominant
        return [j for j, st in enumerate(decomposition.path) if st in dom]

    # -- counting ---------------------------------------------------------

    def _valid_moves(self, p: State):
        return [(a, q) for a in self.alphabet for q in (self.prefix_transition(p, a),) if self.is_valid(q)]

    def counts(self, n: int) -> list[int]:
        """c_0..c_n by the weighted transfer recurrence over prefix states."""
        moves = {p: [(a.weight, q) for a, q in self._valid_moves(p)] for p in self.prefix_states}
        f = [dict() for _ in range(n + 1)]
        f[0][self.initial] = 1
        for m in range(n + 1):
            for p, cnt in f[m].items():
                for w, q in moves[p]:
                    if m + w <= n:
                        f[m + w][q] = f[m + w].get(q, 0) + cnt
        return [sum(row.values()) for row in f]

    def class_count(self, n: int) -> int:
        return self.counts(n)[n]

    def transition_paths(self) -> Iterator[tuple[tuple, tuple]]:
        """Every (path, transition letters) pair starting at the initial prefix state."""

        def walk(path, letters):
            yield tuple(path), tuple(letters)
            p = path[-1]
            for a, q in self._valid_moves(p):
                if q != p:
                    yield from walk(path + [q], letters + [a])

        yield from walk([self.initial], [])

    def count_by_path(self, path: Sequence[State], letters: Sequence[Letter], n: int) -> int:
        """Words of weight n with the given prefix transition path and transition letters."""
        path = [tuple(p) for p in path]
        if not path or path[0] != self.initial:
            raise ValueError("a transition path starts at the initial state")
        if len(letters) != len(path) - 1:
            raise ValueError("need one transition letter per path step")
        for p, a, q in zip(path, letters, path[1:]):
            if q == p or self.prefix_transition(p, a) != q:
                raise ValueError(f"{a} is not a transition letter from {p} to {q}")
        rest = n - sum(a.weight for a in letters)
        if rest < 0:
            return 0
        prod = TruncatedSeries.one(rest)
        for p in path:
            prod = prod * TruncatedSeries(loop_word_counts(self.prefix_loops[p], rest), rest)
        return prod[rest]

    def words_of_weight(self, n: int) -> list[Word]:
        """All class words of weight n, in lexicographic letter order."""
        memo: dict = {}

        def grow(p, r):
            key = (p, r)
            if key in memo:
                return memo[key]
            if r == 0:
                res = [()]
            else:
                res = []
                for a, q in self._valid_moves(p):
                    if a.weight <= r:
                        res.extend((a,) + tail for tail in grow(q, r - a.weight))
            memo[key] = res
            return res

        return [Word(t) for t in grow(self.initial, n)]

    # -- structure of long words -------------------------------------------

    def equitable_partition(self, word: Sequence[Letter]) -> EquitablePartition:
        word = Word(word)
        n = word.weight
        Q = self.Q
        if n < Q:
            raise ValueError(f"word too short for equitable partition (weight {n} < Q = {Q})")
        pre = self.prefix_decomposition(word)
        suf = self.suffix_decomposition(word)
        bounds = [0]
        acc = 0
        i = 0
        for j in range(1, Q + 1):
            while acc * Q < j * n:
                acc += word[i].weight
                i += 1
            bounds.append(i)
        cuts = set(pre.positions) | set(suf.positions)
        free = [not any(lo <= t < hi for t in cuts) for lo, hi in zip(bounds, bounds[1:])]
        part = EquitablePartition(word, Q, bounds, free)
        if part.longest_free_run() < 3:
            raise LemmaViolation(f"equitable partition of {word} has no three consecutive free slices")
        return part

    def is_typical(self, word: Sequence[Letter], block_threshold: int | None = None,
                   stop_at_first: bool = False) -> TypicalityReport:
        """Evaluate the four typicality conditions on every free slice."""
        word = Word(word)
        part = self.equitable_partition(word)
        n = word.weight
        threshold = math.isqrt(n - 1) + 1 if block_threshold is None else block_threshold
        dom = self.dominance
        free_idx = [j + 1 for j, f in enumerate(part.free) if f]
        report = TypicalityReport(True, n, threshold, free_idx)
        pattern_cache: dict = {}
        for j in free_idx:
            lo, hi = part.bounds[j - 1], part.bounds[j]
            x, y, sl = word[:lo], word[hi:], word[lo:hi]
            p, s = self.prefix_state(x), self.suffix_state(y)
            fails = []
            if p not in dom.prefix_dominant or s not in dom.suffix_dominant:
                fails.append((j, 1, f"slice lies in non-dominant block (states {p}, {s})"))
            d_x = self.dominant_count(self.prefix_decomposition(x))
            d_y = self.dominant_count(self.suffix_decomposition(y))
            if d_x + d_y != dom.D + 1:
                fails.append((j, 2, f"d_X + d_Y = {d_x + d_y} != D + 1 = {dom.D + 1}"))
            matched = self.match(p, s)
            if not matched:
                fails.append((j, 3, f"states {p} and {s} do not match"))
            self._tight_hook(p, s, d_x, d_y, matched)
            loop = self.prefix_loops[p]
            letters = sorted(loop, key=lambda a: a.key)
            if letters:
                length = max(4, len(letters))
                key = (tuple(letters), length)
                if key not in pattern_cache:
                    pattern_cache[key] = [Word(t) for t in itertools.product(letters, repeat=length)]
                for pat in pattern_cache[key]:
                    got = count_disjoint_blocks(sl, pat)
                    if got < threshold:
                        fails.append((j, 4, f"{got} disjoint {pat}-blocks < {threshold}"))
                        break
            if fails:
                report.typical = False
                report.failures.extend(fails)
                if stop_at_first:
                    break
        return report

    def _tight_hook(self, p, s, d_x, d_y, matched):
        """Whenever the hypotheses of the tightness lemma hold, the states must match."""
        dom = self.dominance
        if (self.compatible(p, s) and d_x + d_y == dom.D + 1
                and self.prefix_loops.get(p) == self.suffix_loops.get(s)
                and p in dom.prefix_dominant and not matched):
            raise LemmaViolation(f"compatible tight states {p}, {s} with equal dominant loops do not match")

    def nondominant_weight(self, word: Sequence[Letter]) -> int:
        """Total weight of the non-dominant loop blocks of the prefix decomposition."""
        dec = self.prefix_decomposition(word)
        dom = self.dominance.prefix_dominant
        return sum(b.weight for b, st in zip(dec.blocks, dec.path) if st not in dom)

    def dominant_blocks_large(self, word: Sequence[Letter]) -> bool:
        """Every dominant loop block of both decompositions has at least 2KQ+1 letters."""
        for dec in (self.prefix_decomposition(word), self.suffix_decomposition(word)):
            for j in self.dominant_block_indices(dec):
                if not dec.is_large(j, self.K, self.Q):
                    return False
        return True

    def min_dominant_block(self, word: Sequence[Letter]) -> int:
        dec = self.prefix_decomposition(word)
        return min((dec.blocks[j].weight for j in self.dominant_block_indices(dec)), default=0)

    def xy_dominance_holds(self, x: Sequence[Letter], y: Sequence[Letter]) -> bool:
        """If XY is in the class then d_X + d_Y <= D + 1."""
        if not self.contains_word(Word(x) + Word(y)):
            return True
        d_x = self.dominant_count(self.prefix_decomposition(x))
        d_y = self.dominant_count(self.suffix_decomposition(y))
        return d_x + d_y <= self.D + 1

    # -- serialisation -------------------------------------------------------

    def to_dict(self) -> dict:
        dom = self.dominance

        def states(side):
            sts = self.prefix_states if side == "prefix" else self.suffix_states
            loops = self.prefix_loops if side == "prefix" else self.suffix_loops
            grows = self.prefix_growth if side == "prefix" else self.suffix_growth
            step = self.prefix_transition if side == "prefix" else self.suffix_transition
            domset = dom.prefix_dominant if side == "prefix" else dom.suffix_dominant
            wit = self.prefix_witness if side == "prefix" else self.suffix_witness
            out = []
            for st in sts:
                g = grows[st]
                trans = {}
                for a in self.alphabet:
                    q = step(st, a)
                    if q != st:
                        trans[str(a)] = list(q) if self.is_valid(q) else None
                out.append({
                    "state": list(st),
                    "loop": [str(a) for a in sorted(loops[st], key=lambda a: a.key)],
                    "rho": None if math.isinf(g.rho) else g.rho,
                    "gamma": g.gamma,
                    "c": g.c,
                    "dominant": st in domset,
                    "transitions": trans,
                    "witness": str(wit[st]),
                })
            return out

        return {
            "kind": self.kind,
            "mode": self.alphabet.mode,
            "alphabet": [{"letter": str(a), "weight": a.weight} for a in self.alphabet],
            "forbidden": [str(f) for f in self.forbidden],
            "basis": [str(b) for b in self.basis] if self.basis is not None else None,
            "K": self.K,
            "Q": self.Q,
            "gamma": dom.gamma,
            "D": dom.D,
            "prefix_states": states("prefix"),
            "suffix_states": states("suffix"),
        }


# -- construction -------------------------------------------------------------------


def indecomposables_avoiding(basis: Sequence[Permutation], cap: int) -> list[Permutation]:
    """Sum-indecomposable permutations avoiding ``basis``, by increasing size.

    Each size is generated from one-point extensions of the previous size, which is
    complete because every indecomposable of size n >= 2 has an indecomposable
    one-point deletion. Stops at the first empty size >= 2.
    """
    one = Permutation((1,))
    if not avoids(one, basis):
        raise ClassSpecError("the class contains no nonempty permutation")
    found = [one]
    level = [one]
    size = 1
    while True:
        size += 1
        nxt = set()
        for p in level:
            for q in one_point_extensions(p):
                if q not in nxt and is_sum_indecomposable(q) and avoids(q, basis):
                    nxt.add(q)
        if not nxt:
            return found
        if size > cap:
            raise AlphabetNotFinite(f"alphabet not finite under cap: indecomposables of size {size} "
                                    f"remain (cap {cap})")
        level = sorted(nxt)
        found.extend(level)


def minimal_elements(perms: Iterable[Permutation]) -> list[Permutation]:
    perms = sorted(set(perms))
    return [p for p in perms if not any(q != p and contains(q, p) for q in perms)]


def sum_closure_basis(letters: Sequence[Permutation]) -> list[Permutation]:
    """Basis of the sum closure of a down-closed finite set of indecomposables."""
    letter_set = set(letters)

    def in_class(pi):
        return all(c in letter_set for c in sum_decompose(pi))

    if not letter_set:
        return [Permutation((1,))]
    cands = set()
    for a in letter_set:
        for q in one_point_extensions(a):
            if q not in letter_set and is_sum_indecomposable(q) and all(in_class(d) for d in deletions(q)):
                cands.add(q)
    return sorted(cands)


def build_class(spec: dict) -> ClassModel:
    """Build a model from a class description (see the README for the JSON shapes)."""
    kind = spec.get("kind")
    if kind == "basis":
        raw = spec.get("basis")
        if not raw:
            raise ClassSpecError("basis spec needs a nonempty 'basis' list")
        basis = [as_perm(b) for b in raw]
        mins = minimal_elements(basis)
        if len(mins) != len(set(basis)):
            log.warning("basis is not an antichain; using its minimal elements")
        cap = int(spec.get("indec_cap", 12))
        letters = indecomposables_avoiding(mins, cap)
        alphabet = Alphabet.from_permutations(letters)
        letter_set = set(letters)
        forbidden = [alphabet.word_of(b) for b in mins
                     if len(sum_decompose(b)) > 1 and all(c in letter_set for c in sum_decompose(b))]
        if not forbidden:
            log.info("no basis element splits over the alphabet; the class is sum-closed")
        return ClassModel(alphabet, forbidden, basis=mins, kind="basis")
    if kind == "alphabet":
        raw = spec.get("letters")
        if not raw:
            raise ClassSpecError("alphabet spec needs a nonempty 'letters' list")
        perms = [as_perm(x) for x in raw]
        letter_set = set(perms)
        for p in perms:
            if not is_sum_indecomposable(p):
                raise ClassSpecError(f"letter {p} is not sum-indecomposable")
            for d in deletions(p):
                if len(d) and not all(c in letter_set for c in sum_decompose(d)):
                    raise ClassSpecError(f"letters are not down-closed: {p} has pattern {d}")
        alphabet = Alphabet.from_permutations(perms)
        return ClassModel(alphabet, (), basis=sum_closure_basis(perms), kind="alphabet")
    if kind == "abstract":
        raw = spec.get("letters")
        if not raw:
            raise ClassSpecError("abstract spec needs a nonempty 'letters' list")
        items = []
        for item in raw:
            if isinstance(item, dict):
                items.append((item["name"], int(item.get("weight", 1))))
            else:
                items.append((str(item), 1))
        alphabet = Alphabet.abstract(items)
        forbidden = [alphabet.parse_word(f) for f in spec.get("forbidden", [])]
        return ClassModel(alphabet, forbidden, kind="abstract")
    raise ClassSpecError(f"unknown class kind {kind!r}")


def load_class(path) -> ClassModel:
    with open(path) as fh:
        try:
            spec = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ClassSpecError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(spec, dict):
        raise ClassSpecError(f"{path}: class spec must be a JSON object")
    return build_class(spec)


def prefix_transition(model: ClassModel, p: State, a: Letter) -> State:
    return model.prefix_transition(p, a)


def suffix_transition(model: ClassModel, s: State, a: Letter) -> State:
    return model.suffix_transition(s, a)


def dominance(model: ClassModel) -> Dominance:
    return model.dominance


def class_count(model: ClassModel, n: int) -> int:
    return model.class_count(n)
