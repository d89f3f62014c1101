"""Uniform random words: Boltzmann sampling with rejection and an exact counting sampler."""

from __future__ import annotations

import math
import warnings
import weakref
from collections import Counter
from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from .automaton import ClassModel, _one_minus_root
from .words import Alphabet, Word, count_disjoint_blocks

MAX_RESTARTS = 10 ** 7


class RandomSource:
    """Seeded PCG64 stream; equal seeds give identical draws on every platform."""

    def __init__(self, seed: int = 0):
        self.seed = int(seed)
        self.gen = np.random.Generator(np.random.PCG64(self.seed))

    def spawn(self, worker: int) -> "RandomSource":
        return RandomSource(self.seed + worker)

    def random(self, size=None):
        return self.gen.random(size)


@dataclass(frozen=True)
class SamplerModel:
    alphabet: Alphabet
    kappa: float
    probs: np.ndarray
    cdf: np.ndarray
    weights: np.ndarray
    mean_weight: float
    period: int
    supercritical: bool = True

    @property
    def aperiodic(self) -> bool:
        return self.period == 1


def build_sampler(alphabet: Alphabet) -> SamplerModel:
    """Letter distribution P(a) = kappa^weight(a) with A(kappa) = 1."""
    if len(alphabet) == 0:
        raise ValueError("cannot sample from an empty alphabet")
    ws = [a.weight for a in alphabet.letters]
    kappa = _one_minus_root(ws)
    probs = np.array([kappa ** w for w in ws])
    total = probs.sum()
    if abs(total - 1.0) > 1e-9:
        raise ArithmeticError(f"letter probabilities sum to {total}")
    cdf = np.cumsum(probs)
    cdf[-1] = 1.0
    period = reduce(math.gcd, ws)
    if period != 1:
        warnings.warn(f"alphabet is periodic (gcd of weights = {period})", stacklevel=2)
    mean = math.fsum(w * kappa ** w for w in ws)
    return SamplerModel(alphabet, kappa, probs, cdf, np.array(ws), mean, period)


def draw_letters(model: SamplerModel, k: int, rng: RandomSource) -> np.ndarray:
    """Indices of k independent letters by inverse CDF."""
    return np.searchsorted(model.cdf, rng.random(k), side="right")


def boltzmann_sample(model: SamplerModel, n: int, rng: RandomSource,
                     max_restarts: int = MAX_RESTARTS) -> tuple[Word, int]:
    """Uniform word of weight exactly n; also returns the number of rejected attempts.

    Each attempt draws letters until the weight reaches n and is rejected unless it
    hits n exactly. An attempt is realised by drawing n letters at once and keeping
    the shortest prefix of weight at least n.
    """
    if n < 0:
        raise ValueError("weight must be non-negative")
    if n == 0:
        return Word(), 0
    if n % model.period:
        raise ValueError(f"no word of weight {n}: letter weights have period {model.period}")
    letters = model.alphabet.letters
    draws = max(1, n // int(model.weights.min()))
    for rejected in range(max_restarts):
        idx = draw_letters(model, draws, rng)
        cum = np.cumsum(model.weights[idx])
        stop = int(np.searchsorted(cum, n, side="left"))
        if cum[stop] == n:
            return Word(letters[i] for i in idx[:stop + 1]), rejected
    raise RuntimeError(f"Boltzmann sampler gave up after {max_restarts} restarts at n = {n}")


class _CompletionTable:
    """Number of ways to finish a class word from each prefix state with r weight left."""

    def __init__(self, model: ClassModel):
        self.model = model
        self.moves = {p: [(a, q) for a in model.alphabet
                          for q in (model.prefix_transition(p, a),) if model.is_valid(q)]
                      for p in model.prefix_states}
        self.rows = [{p: 1 for p in model.prefix_states}]

    def upto(self, n: int):
        rows = self.rows
        while len(rows) <= n:
            r = len(rows)
            rows.append({p: sum(rows[r - a.weight][q] for a, q in mv if a.weight <= r)
                         for p, mv in self.moves.items()})
        return rows


_tables: "weakref.WeakKeyDictionary[ClassModel, _CompletionTable]" = weakref.WeakKeyDictionary()


def _table(model: ClassModel) -> _CompletionTable:
    t = _tables.get(model)
    if t is None:
        t = _tables[model] = _CompletionTable(model)
    return t


def uniform_class_sample(model: ClassModel, n: int, rng: RandomSource) -> Word:
    """Exactly uniform word of weight n in the class, drawn letter by letter from completion counts."""
    table = _table(model)
    rows = table.upto(n)
    p = model.initial
    if rows[n][p] == 0:
        raise ValueError(f"the class has no element of size {n}")
    out = []
    r = n
    while r:
        total = rows[r][p]
        u = rng.random()
        acc = 0.0
        choice = None
        for a, q in table.moves[p]:
            if a.weight > r:
                continue
            cnt = rows[r - a.weight][q]
            if not cnt:
                continue
            choice = (a, q)
            acc += cnt / total
            if u < acc:
                break
        a, q = choice
        out.append(a)
        r -= a.weight
        p = q
    return Word(out)


def sample_words(model: ClassModel, n: int, count: int, rng: RandomSource) -> list[Word]:
    """Uniform class words; sum-closed classes go through the Boltzmann sampler."""
    if model.sum_closed:
        sm = build_sampler(model.alphabet)
        return [boltzmann_sample(sm, n, rng)[0] for _ in range(count)]
    return [uniform_class_sample(model, n, rng) for _ in range(count)]


def acceptance_rate(model: SamplerModel, n: int, attempts: int, rng: RandomSource) -> float:
    """Fraction of first-phase attempts that land exactly on weight n."""
    draws = max(1, n // int(model.weights.min()))
    hits = 0
    for _ in range(attempts):
        cum = np.cumsum(model.weights[draw_letters(model, draws, rng)])
        hits += int(cum[np.searchsorted(cum, n, side="left")] == n)
    return hits / attempts


@dataclass
class EmpiricalReport:
    n: int
    samples: int
    seed: int
    records: list = field(default_factory=list)  # (statistic, n, samples, value)
    histograms: dict = field(default_factory=dict)

    def add(self, statistic: str, value, samples: int | None = None):
        self.records.append((statistic, self.n, self.samples if samples is None else samples, value))

    def value(self, statistic: str):
        for s, _, _, v in self.records:
            if s == statistic:
                return v
        raise KeyError(statistic)

    def csv_rows(self):
        yield ("statistic", "n", "samples", "value")
        yield from self.records


def empirical_suite(model: ClassModel, n: int, samples: int, rng: RandomSource,
                    patterns=(), letters_per_trial: int = 1000, concentration_trials: int = 0,
                    epsilon: float = 0.1, block_threshold: int | None = None) -> EmpiricalReport:
    """Measure the statistics behind the random-structure lemmas; asserts nothing.

    Reports letter-weight concentration for fixed-length letter sequences, disjoint
    P-block counts, non-dominant block weight, dominant block sizes and the
    typicality frequency for uniform words of weight ``n``.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    report = EmpiricalReport(n, samples, rng.seed)
    sm = build_sampler(model.alphabet)
    if concentration_trials:
        k = letters_per_trial
        means = np.array([sm.weights[draw_letters(sm, k, rng)].sum() / k for _ in range(concentration_trials)])
        outside = float(np.mean(np.abs(means - sm.mean_weight) > epsilon * sm.mean_weight))
        report.add("mean_letter_weight", sm.mean_weight, concentration_trials)
        report.add("empirical_weight_per_letter", float(means.mean()), concentration_trials)
        report.add(f"fraction_outside_{epsilon:g}", outside, concentration_trials)

    words = sample_words(model, n, samples, rng)
    for pat in patterns:
        pat = Word(pat)
        counts = [count_disjoint_blocks(w, pat) for w in words]
        ratios = np.array(counts) / n
        report.histograms[f"blocks[{pat}]"] = Counter(counts)
        report.add(f"min_blocks[{pat}]", min(counts))
        report.add(f"mean_blocks_per_n[{pat}]", float(ratios.mean()))
        report.add(f"p01_blocks_per_n[{pat}]", float(np.percentile(ratios, 1)))

    nondom = [model.nondominant_weight(w) for w in words]
    large = [model.dominant_blocks_large(w) for w in words]
    mins = [model.min_dominant_block(w) for w in words]
    root = math.sqrt(n)
    report.histograms["nondominant_weight"] = Counter(nondom)
    report.histograms["min_dominant_block"] = Counter(mins)
    report.add("fraction_nondominant_le_sqrt_n", float(np.mean([x <= root for x in nondom])))
    report.add("fraction_dominant_blocks_large", float(np.mean(large)))
    report.add("fraction_large_and_nondominant_le_sqrt_n",
               float(np.mean([a and x <= root for a, x in zip(large, nondom)])))
    report.add("mean_min_dominant_block", float(np.mean(mins)))
    if n >= model.Q:
        typ = [model.is_typical(w, block_threshold, stop_at_first=True).typical for w in words]
        report.add("typical_fraction", float(np.mean(typ)))
    return report
