"""Avoider counting inside a class, observed Wilf classes, and predicted equivalences."""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .automaton import ClassModel, NotInClassError
from .perm import DIHEDRAL, apply_symmetry, as_perm
from .words import PERMUTATION, Word, shuffle_orbit


class HypothesisError(ValueError):
    """A move was requested on a word that does not satisfy its hypotheses."""

    def __init__(self, hypothesis: str, detail: str = ""):
        self.hypothesis = hypothesis
        super().__init__(f"{hypothesis}: {detail}" if detail else hypothesis)


# -- patterns as words ----------------------------------------------------------


def pattern_word(model: ClassModel, pi) -> Word:
    """The class word of a pattern; raises if the pattern is not in the class."""
    if isinstance(pi, Word):
        w = pi
        model.alphabet.check(w)
    elif model.alphabet.mode == PERMUTATION:
        try:
            w = model.alphabet.word_of(as_perm(pi))
        except ValueError:
            raise ValueError(f"pattern {pi} is not in the class") from None
    else:
        w = model.alphabet.parse_word(str(pi))
    if not model.contains_word(w):
        raise ValueError(f"pattern {pi} is not in the class")
    return w


def _label(model: ClassModel, w: Word):
    return w.perm() if model.alphabet.mode == PERMUTATION else w


def class_patterns(model: ClassModel, k: int) -> list:
    """Every element of C_k, as permutations (or words for abstract classes), sorted."""
    words = model.words_of_weight(k)
    if model.alphabet.mode == PERMUTATION:
        return sorted(w.perm() for w in words)
    return sorted(words, key=str)


# -- signatures ------------------------------------------------------------------


@dataclass(frozen=True)
class WilfSignature:
    pattern: object
    k: int
    counts: tuple  # a_k..a_N
    N: int
    n_exact: int
    states: int

    @property
    def exact(self) -> bool:
        return self.N >= self.n_exact

    def a(self, n: int) -> int:
        if not self.k <= n <= self.N:
            raise IndexError(f"a_{n} outside the computed range {self.k}..{self.N}")
        return self.counts[n - self.k]


def _product_moves(model: ClassModel, w: Word):
    """Reachable product states (class prefix state, greedy progress into w) and their moves."""
    ell = len(w)
    alphabet = model.alphabet
    start = (model.initial, 0)
    moves = {}
    stack = [start]
    while stack:
        st = stack.pop()
        if st in moves:
            continue
        p, j = st
        out = []
        for a in alphabet:
            q = model.prefix_transition(p, a)
            if not model.is_valid(q):
                continue
            jj = alphabet.advance(w, j, a)
            if jj == ell:
                continue
            out.append((a.weight, (q, jj)))
            stack.append((q, jj))
        moves[st] = out
    return start, moves


def signature_horizon(model: ClassModel, pi, N: int | None = None) -> tuple[int, bool]:
    """Horizon 2*S*K + |pi| after which two avoider sequences that agree keep agreeing.

    S counts reachable non-absorbed product states. A one-letter pattern contained in
    every letter has no nonempty avoiders, so it is exact at its own size.
    """
    w = pattern_word(model, pi)
    k = w.weight
    if len(w) == 1 and all(model.alphabet.letter_leq(w, b) for b in model.alphabet):
        n_exact = k
    else:
        _, moves = _product_moves(model, w)
        n_exact = 2 * len(moves) * model.K + k
    return n_exact, (N is not None and N >= n_exact)


def avoider_series(model: ClassModel, pi, N: int) -> WilfSignature:
    """a_n = |C_n ∩ Av(pi)| for n = |pi|..N by a DP over product states."""
    w = pattern_word(model, pi)
    k = w.weight
    if N < k:
        raise ValueError(f"horizon N = {N} is below the pattern size {k}")
    start, moves = _product_moves(model, w)
    f = [dict() for _ in range(N + 1)]
    f[0][start] = 1
    for m in range(N + 1):
        for st, cnt in f[m].items():
            for wt, nxt in moves[st]:
                if m + wt <= N:
                    row = f[m + wt]
                    row[nxt] = row.get(nxt, 0) + cnt
    counts = tuple(sum(f[n].values()) for n in range(k, N + 1))
    n_exact, _ = signature_horizon(model, w)
    return WilfSignature(_label(model, w), k, counts, N, n_exact, len(moves))


# -- partitions -------------------------------------------------------------------


@dataclass
class WilfPartition:
    k: int
    c: int
    blocks: list  # lists of patterns, each sorted; blocks ordered by first member
    exact: bool
    horizon: int
    n_exact: int
    signatures: dict = field(default_factory=dict)

    @property
    def w(self) -> int:
        return len(self.blocks)

    def block_of(self, pi) -> int:
        for i, block in enumerate(self.blocks):
            if pi in block:
                return i
        raise KeyError(f"{pi} is not a pattern of size {self.k}")

    def to_dict(self) -> dict:
        return {"k": self.k, "c": self.c, "w": self.w, "exact": self.exact,
                "blocks": [[str(p) for p in b] for b in self.blocks]}


def partition_horizon(model: ClassModel, k: int) -> int:
    """Smallest N at which the partition of C_k is exact."""
    return max((signature_horizon(model, p)[0] for p in class_patterns(model, k)), default=k)


def wilf_partition(model: ClassModel, k: int, N: int) -> WilfPartition:
    """Group C_k by avoider signatures computed through ``min(N, exact horizon)``."""
    if N < k:
        raise ValueError(f"horizon N = {N} is below the pattern size {k}")
    pats = class_patterns(model, k)
    n_exact = partition_horizon(model, k)
    horizon = min(N, n_exact)
    exact = N >= n_exact
    groups: dict = {}
    sigs = {}
    for p in pats:
        sig = avoider_series(model, p, horizon)
        sigs[p] = sig
        groups.setdefault(sig.counts, []).append(p)
    blocks = sorted(groups.values(), key=lambda b: b[0] if model.alphabet.mode == PERMUTATION else str(b[0]))
    if not exact:
        for b in blocks:
            if len(b) > 1:
                warnings.warn(f"provisional Wilf block {[str(p) for p in b]} at inexact horizon "
                              f"{horizon} < {n_exact}", stacklevel=2)
    return WilfPartition(k, len(pats), blocks, exact, horizon, n_exact, sigs)


# -- predicted equivalences ----------------------------------------------------------


def class_symmetries(model: ClassModel) -> list[str]:
    """Dihedral symmetries that fix the basis setwise, hence map the class to itself."""
    if model.alphabet.mode != PERMUTATION or model.basis is None:
        return ["id"]
    basis = set(model.basis)
    return [op for op in DIHEDRAL if {apply_symmetry(b, op) for b in basis} == basis]


def symmetry_orbit(model: ClassModel, pi) -> set:
    w = pattern_word(model, pi)
    if model.alphabet.mode != PERMUTATION:
        return {w}
    pi = w.perm()
    return {apply_symmetry(pi, op) for op in class_symmetries(model)}


def finest_incompatible_parts(model: ClassModel, w: Word) -> list[Word]:
    """Cut between every adjacent incompatible pair of letters."""
    if not w:
        return []
    parts = [[w[0]]]
    for a, b in zip(w, w[1:]):
        if model.alphabet.incompatible(a, b):
            parts.append([b])
        else:
            parts[-1].append(b)
    return [Word(p) for p in parts]


def word_shuffles(model: ClassModel, w: Word) -> set:
    """Closure of ``{w}`` under rearranging finest incompatible factorisations."""
    seen = {Word(w)}
    todo = [Word(w)]
    while todo:
        cur = todo.pop()
        for v in shuffle_orbit(model.alphabet, finest_incompatible_parts(model, cur)):
            if v not in seen:
                seen.add(v)
                todo.append(v)
    return seen


def shuffle_equivalents(model: ClassModel, pi) -> set:
    if not model.sum_closed:
        raise ValueError("shuffle equivalence needs a sum-closed class; use move_poly or symmetry_orbit")
    w = pattern_word(model, pi)
    return {_label(model, v) for v in word_shuffles(model, w)}


def _move_blocks(model: ClassModel, W: Word):
    """Index of the block B in the prefix decomposition and of B' in the suffix decomposition."""
    pre = model.prefix_decomposition(W)
    suf = model.suffix_decomposition(W)
    last = len(pre.blocks) - 1
    cands = [j for j in model.dominant_block_indices(pre) if j < last]
    if not cands:
        raise HypothesisError("B-rightmost", "every dominant prefix loop block is rightmost")
    j = next((t for t in cands if pre.blocks[t]), cands[0])
    lo, hi = pre.spans[j]
    disjoint = [i for i in model.dominant_block_indices(suf)
                if suf.spans[i][1] <= lo or suf.spans[i][0] >= hi]
    if not disjoint:
        raise HypothesisError("B-rightmost", "no dominant suffix loop block disjoint from B")
    i = min(disjoint, key=lambda t: suf.spans[t][0])
    return pre, j, suf, i


def move_poly(model: ClassModel, W: Sequence, k: int, check_hypotheses: bool = True,
              block_threshold: int | None = None) -> Word:
    """Move k weight-1 letters from the central piece of B into that of B'.

    With ``check_hypotheses`` the word must be typical with all dominant blocks large.
    Without it the whole loop blocks serve as central pieces; such instances test
    the conclusion outside the range where the equivalence is guaranteed.
    """
    W = Word(W)
    if k == 0:
        return W
    if not model.unbounded_polynomial:
        raise HypothesisError("not-polynomial", f"gamma = {model.gamma}, D = {model.D}")
    K, Q = model.K, model.Q
    if check_hypotheses:
        if W.weight < Q:
            raise HypothesisError("not-typical", f"weight {W.weight} < Q = {Q}")
        if not model.dominant_blocks_large(W):
            raise HypothesisError("block-not-large", f"some dominant block has fewer than {2 * K * Q + 1} letters")
        rep = model.is_typical(W, block_threshold, stop_at_first=True)
        if not rep.typical:
            raise HypothesisError("not-typical", rep.failures[0][2])
    pre, j, suf, i = _move_blocks(model, W)
    if check_hypotheses:
        src = pre.central_span(j, K, Q)
        dst = suf.central_span(i, K, Q)
    else:
        src, dst = pre.spans[j], suf.spans[i]
    movable = [t for t in range(*src) if W[t].weight == 1]
    if not 1 <= k <= len(movable):
        raise HypothesisError("k out of range", f"k = {k}, central piece has {len(movable)} movable letters")
    taken = set(movable[:k])
    moved = [W[t] for t in movable[:k]]
    out = []
    for t, a in enumerate(W):
        if t == dst[0]:
            out.extend(moved)
        if t not in taken:
            out.append(a)
    if dst[0] >= len(W):
        out.extend(moved)
    W2 = Word(out)
    if W2.weight != W.weight or not model.contains_word(W2):
        raise NotInClassError(W2, len(W2))
    return W2


def move_poly_instances(model: ClassModel, W: Word, check_hypotheses: bool = True,
                        block_threshold: int | None = None) -> list[tuple[int, Word]]:
    """All (k, W') produced by move_poly for k = 1, 2, ... until k leaves its range."""
    out = []
    for k in itertools.count(1):
        try:
            out.append((k, move_poly(model, W, k, check_hypotheses, block_threshold)))
        except HypothesisError as exc:
            if exc.hypothesis == "k out of range" and k > 1:
                break
            raise
    return out


def loop_shuffles(model: ClassModel, W: Word, block_threshold: int | None = None) -> set:
    """Shuffle orbits inside the central pieces of dominant loop blocks of a typical word."""
    W = Word(W)
    if W.weight < model.Q or not model.is_typical(W, block_threshold, stop_at_first=True).typical:
        raise HypothesisError("not-typical")
    pre = model.prefix_decomposition(W)
    out = {W}
    for j in model.dominant_block_indices(pre):
        lo, hi = pre.central_span(j, model.K, model.Q)
        if hi <= lo:
            continue
        for mid in word_shuffles(model, W[lo:hi]):
            v = W[:lo] + mid + W[hi:]
            if model.contains_word(v):
                out.add(v)
    return out


@dataclass
class OrbitCheck:
    kind: str  # symmetry, shuffle, move, move-waived
    members: tuple
    blocks: tuple
    exact: bool

    @property
    def consistent(self) -> bool:
        return len(set(self.blocks)) <= 1


@dataclass
class PredictionReport:
    k: int
    partition: WilfPartition
    checks: list = field(default_factory=list)
    skipped: dict = field(default_factory=dict)  # reason -> count

    @property
    def violations(self) -> list:
        return [c for c in self.checks if not c.consistent and c.exact]

    @property
    def warnings(self) -> list:
        return [c for c in self.checks if not c.consistent and not c.exact]

    @property
    def ok(self) -> bool:
        return not self.violations

    def count(self, kind: str) -> int:
        return sum(1 for c in self.checks if c.kind == kind)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "exact": self.partition.exact,
            "partition": self.partition.to_dict(),
            "checks": {kind: self.count(kind) for kind in sorted({c.kind for c in self.checks})},
            "skipped": dict(self.skipped),
            "violations": [{"kind": c.kind, "members": [str(m) for m in c.members]} for c in self.violations],
            "warnings": [{"kind": c.kind, "members": [str(m) for m in c.members]} for c in self.warnings],
        }


def verify_predictions(model: ClassModel, k: int, N: int, move_sizes: Iterable[int] = (),
                       block_threshold: int | None = None) -> PredictionReport:
    """Check that every predicted orbit of size-k patterns sits inside one observed block.

    Move instances are generated for each pattern whose word satisfies the move
    hypotheses, and additionally with hypotheses waived on the words ``1^a.t.1^b``
    style inputs listed by ``move_sizes`` (the weights of words to probe).
    """
    part = wilf_partition(model, k, N)
    report = PredictionReport(k, part)
    perm_mode = model.alphabet.mode == PERMUTATION
    for pi in class_patterns(model, k):
        orbit = sorted(symmetry_orbit(model, pi), key=str)
        report.checks.append(OrbitCheck("symmetry", tuple(orbit),
                                        tuple(part.block_of(p) for p in orbit), part.exact))
        if model.sum_closed:
            sh = sorted(shuffle_equivalents(model, pi), key=str)
            report.checks.append(OrbitCheck("shuffle", tuple(sh),
                                            tuple(part.block_of(p) for p in sh), part.exact))
        if model.unbounded_polynomial:
            w = pattern_word(model, pi)
            for waived in (False, True):
                try:
                    inst = move_poly_instances(model, w, check_hypotheses=not waived,
                                               block_threshold=block_threshold)
                except HypothesisError as exc:
                    key = f"move{'-waived' if waived else ''}: {exc.hypothesis}"
                    report.skipped[key] = report.skipped.get(key, 0) + 1
                    continue
                for _, w2 in inst:
                    members = (pi, _label(model, w2) if perm_mode else w2)
                    blocks = (part.block_of(pi), part.block_of(members[1]))
                    report.checks.append(OrbitCheck("move-waived" if waived else "move",
                                                    members, blocks, part.exact))
        elif not model.sum_closed:
            w = pattern_word(model, pi)
            try:
                orbit = loop_shuffles(model, w, block_threshold)
            except HypothesisError:
                report.skipped["loop_shuffle: not-typical"] = report.skipped.get("loop_shuffle: not-typical", 0) + 1
            else:
                labels = sorted((_label(model, v) for v in orbit), key=str)
                report.checks.append(OrbitCheck("loop_shuffle", tuple(labels),
                                                tuple(part.block_of(p) for p in labels), part.exact))
    for n in move_sizes:
        if not model.unbounded_polynomial:
            break
        _probe_long_moves(model, part, n, report, block_threshold)
    for c in report.warnings:
        warnings.warn(f"{c.kind} orbit {[str(m) for m in c.members]} splits at an inexact horizon", stacklevel=2)
    return report


def _probe_long_moves(model: ClassModel, part: WilfPartition, n: int, report: PredictionReport,
                      block_threshold: int | None):
    """Hypothesis-checked moves on class words of weight n, compared by their own signatures."""
    for w in model.words_of_weight(n):
        try:
            inst = move_poly_instances(model, w, True, block_threshold)
        except HypothesisError as exc:
            key = f"move-long: {exc.hypothesis}"
            report.skipped[key] = report.skipped.get(key, 0) + 1
            continue
        n_exact = max(signature_horizon(model, w)[0], *(signature_horizon(model, v)[0] for _, v in inst))
        ref = avoider_series(model, w, n_exact).counts
        for _, v in inst:
            same = avoider_series(model, v, n_exact).counts == ref
            report.checks.append(OrbitCheck("move-long", (_label(model, w), _label(model, v)),
                                            (0, 0 if same else 1), True))


# -- collapse -----------------------------------------------------------------------


@dataclass
class CollapseRow:
    k: int
    c_k: int
    w_k: int
    exact: bool

    @property
    def ratio(self) -> float:
        return self.w_k / self.c_k

    @property
    def mean_block(self) -> float:
        return self.c_k / self.w_k


@dataclass
class CollapseReport:
    rows: list

    @property
    def ratios(self) -> list[float]:
        return [r.ratio for r in self.rows]

    @property
    def non_increasing(self) -> bool:
        return all(b <= a for a, b in zip(self.ratios, self.ratios[1:]))

    @property
    def trend(self) -> str:
        if all(b < a for a, b in zip(self.ratios, self.ratios[1:])):
            return "strictly decreasing"
        if self.non_increasing:
            return "non-increasing"
        return "not monotone"

    def csv_rows(self):
        yield ("k", "c_k", "w_k", "ratio", "mean_block", "exact")
        for r in self.rows:
            yield (r.k, r.c_k, r.w_k, f"{r.ratio:.6f}", f"{r.mean_block:.6f}", str(r.exact).lower())


def collapse_report(model: ClassModel, k_range: Iterable[int], N: int | None = None) -> CollapseReport:
    """w_k against c_k over a range of sizes; ``N=None`` uses each size's exact horizon."""
    rows = []
    for k in k_range:
        horizon = partition_horizon(model, k) if N is None else N
        part = wilf_partition(model, k, max(horizon, k))
        rows.append(CollapseRow(k, part.c, part.w, part.exact))
    return CollapseReport(rows)
