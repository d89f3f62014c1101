"""Acceptance criteria 1-12. Each test records one pass/fail line (see the terminal summary)."""

from __future__ import annotations

import math
import time
from collections import Counter, defaultdict

import numpy as np
from scipy.stats import chisquare

from wilfcollapse.automaton import growth, loop_word_counts
from wilfcollapse.perm import Permutation, contains, direct_sum, sum_decompose
from wilfcollapse.sampler import (
    RandomSource,
    acceptance_rate,
    boltzmann_sample,
    build_sampler,
    count_disjoint_blocks,
    uniform_class_sample,
)
from wilfcollapse.series import TruncatedSeries
from wilfcollapse.wilf import (
    avoider_series,
    collapse_report,
    partition_horizon,
    verify_predictions,
    wilf_partition,
)
from wilfcollapse.words import Word, series_I, series_I_star

from oracles import brute_avoiders, brute_class_levels, brute_contains, containment_series
from report import record


def test_criterion_01_greedy_matches_exhaustive_containment(ab2, ab3):
    t0 = time.perf_counter()
    checked = 0
    bad = []
    for alphabet in (ab2, ab3):
        words = list(alphabet.words_up_to(7))
        perms = {w: w.perm().entries for w in words}
        for w in words:
            for v in words:
                checked += 1
                if alphabet.leq(w, v) != brute_contains(perms[w], perms[v]):
                    bad.append((str(w), str(v)))
    secs = time.perf_counter() - t0
    ok = not bad and secs < 60
    record(1, ok, f"{checked} word pairs, {len(bad)} disagreements, {secs:.1f}s")
    assert ok, bad[:5]


def test_criterion_02_worked_examples():
    s = direct_sum("231", "2413")
    checks = [
        contains("123", "31524") is True,
        contains("321", "31524") is False,
        s == Permutation.parse("2315746"),
        sum_decompose(s) == (Permutation.parse("231"), Permutation.parse("2413")),
        direct_sum(*sum_decompose(s)) == s,
    ]
    ok = all(checks)
    record(2, ok, f"231 ⊕ 2413 = {s}, components {[str(c) for c in sum_decompose(s)]}")
    assert ok, checks


def test_criterion_03_quotient_identity(ab2):
    N = 12
    words = list(ab2.words_up_to(5))
    a_star = ab2.series_A_star(N)
    failures = []
    for w in words:
        i_w = TruncatedSeries(containment_series(ab2, w, N), N)
        i_star = TruncatedSeries(containment_series(ab2, w, N, minimal=True), N)
        if i_w != i_star * a_star:
            failures.append(str(w))
        if i_w != series_I(ab2, w, N) or i_star != series_I_star(ab2, w, N):
            failures.append(f"dp:{w}")
    ok = not failures
    record(3, ok, f"I_W = I*_W/(1-A) to N={N} for {len(words)} words of weight <= 5")
    assert ok, failures


def _random_factorisation(alphabet, rng):
    while True:
        length = int(rng.integers(2, 6))
        w = Word(alphabet.letters[i] for i in rng.integers(0, len(alphabet), size=length))
        if w.weight > 10:
            continue
        cands = [i for i in range(1, length) if alphabet.incompatible(w[i - 1], w[i])]
        if not cands:
            continue
        mask = rng.random(len(cands)) < 0.6
        if not mask.any():
            mask[int(rng.integers(len(cands)))] = True
        return w, [c for c, m in zip(cands, mask) if m]


def test_criterion_04_factorisation_identity(ab2, ab3):
    N = 12
    rng = np.random.default_rng(20241019)
    failures = []
    stars = {id(a): a.series_A_star(N) for a in (ab2, ab3)}
    for t in range(100):
        alphabet = ab2 if t % 2 == 0 else ab3
        w, cuts = _random_factorisation(alphabet, rng)
        bounds = [0, *cuts, len(w)]
        parts = [w[lo:hi] for lo, hi in zip(bounds, bounds[1:])]
        rhs = stars[id(alphabet)]
        for part in parts:
            rhs = rhs * TruncatedSeries(containment_series(alphabet, part, N, minimal=True), N)
        lhs = TruncatedSeries(containment_series(alphabet, w, N), N)
        if lhs != rhs:
            failures.append((str(w), cuts))
    ok = not failures
    record(4, ok, f"100 seeded incompatible factorisations, {len(failures)} failures")
    assert ok, failures


def test_criterion_05_anagrams_share_signatures(layered):
    N = 14
    groups = defaultdict(list)
    for w in layered.alphabet.words_up_to(6):
        if w:
            groups[(w.weight, tuple(sorted(Counter(str(a) for a in w).items())))].append(w)
    bad = []
    pairs = 0
    for ws in groups.values():
        ref = avoider_series(layered, ws[0].perm(), N).counts
        for v in ws[1:]:
            pairs += 1
            if avoider_series(layered, v.perm(), N).counts != ref:
                bad.append((str(ws[0]), str(v)))
    levels = brute_class_levels(layered.basis, 4)
    brute_132 = [brute_avoiders(levels[n], (1, 3, 2)) for n in (3, 4)]
    brute_213 = [brute_avoiders(levels[n], (2, 1, 3)) for n in (3, 4)]
    sig = avoider_series(layered, "132", N)
    ok = (not bad and brute_132 == brute_213 == [2, 2] and list(sig.counts[:2]) == [2, 2]
          and sig.counts == avoider_series(layered, "213", N).counts)
    record(5, ok, f"{pairs} anagram pairs agree to N={N}; 132 ≈ 213 with (a_3, a_4) = {tuple(sig.counts[:2])}")
    assert ok, bad


def test_criterion_06_abstract_example(abstract):
    word = abstract.alphabet.parse_word
    p = abstract.prefix_state(word("d.a"))
    s = abstract.suffix_state(word("c"))
    p2 = abstract.prefix_state(word("d.b.a"))
    ok = (p == (1, 1) and s == (1, 1) and abstract.match(p, s)
          and p2 == (1, 2) and abstract.compatible(p2, s) and not abstract.match(p2, s))
    record(6, ok, f"p(da)={p}, s(c)={s}, match={abstract.match(p, s)}; p(dba)={p2}, match={abstract.match(p2, s)}")
    assert ok


def test_criterion_07_growth():
    g = growth([1, 2])
    rho = (math.sqrt(5) - 1) / 2
    n30 = loop_word_counts([1, 2], 30)[30]
    rel = abs(n30 * g.rho ** 30 - g.c) / g.c
    ok = abs(g.rho - rho) < 1e-9 and abs(g.c - 0.7236067977) < 1e-4 and rel < 0.01
    record(7, ok, f"rho={g.rho:.12f}, c={g.c:.10f}, |L*_30| rho^30 off by {100 * rel:.4f}%")
    assert ok


def test_criterion_08_polynomial_fixture(poly):
    counts = poly.counts(30)
    ratios = [counts[n] / (n ** (poly.D - 1) * poly.gamma ** n) for n in range(1, 31)]
    N = partition_horizon(poly, 3)
    part = wilf_partition(poly, 3, N)
    ok = ([str(a) for a in poly.alphabet] == ["1", "21"] and [str(f) for f in poly.forbidden] == ["21.21"]
          and counts[1:] == list(range(1, 31)) and poly.gamma == 1.0 and poly.D == 2
          and all(r == 1 for r in ratios) and part.exact
          and part.to_dict()["blocks"] == [["123"], ["132", "213"]])
    record(8, ok, f"c_n = n for n <= 30, gamma={poly.gamma}, D={poly.D}, w_3={part.w} exact at N={N}")
    assert ok


def test_criterion_09_sampler_uniformity(layered, poly):
    n, samples = 8, 100_000
    rng = RandomSource(9)
    sm = build_sampler(layered.alphabet)
    words = [str(w) for w in layered.words_of_weight(n)]
    hits = Counter(str(boltzmann_sample(sm, n, rng)[0]) for _ in range(samples))
    p_boltz = chisquare([hits[w] for w in words]).pvalue
    pwords = [str(w) for w in poly.words_of_weight(n)]
    phits = Counter(str(uniform_class_sample(poly, n, rng)) for _ in range(samples))
    p_unif = chisquare([phits[w] for w in pwords]).pvalue
    rates = {m: acceptance_rate(sm, m, 2000, RandomSource(m)) for m in range(50, 501, 50)}
    ok = (len(words) == 34 and set(hits) == set(words) and p_boltz > 1e-3
          and set(phits) == set(pwords) and p_unif > 1e-3 and min(rates.values()) >= 0.1)
    record(9, ok, f"chi2 p={p_boltz:.3f} (34 words), counting sampler p={p_unif:.3f}, "
                  f"min acceptance {min(rates.values()):.3f} over n=50..500")
    assert ok


def test_criterion_10_block_abundance(layered):
    n, samples = 300, 1000
    sm = build_sampler(layered.alphabet)
    rng = RandomSource(10)
    pattern = layered.alphabet.parse_word("1.21.1")
    blocks = np.array([count_disjoint_blocks(boltzmann_sample(sm, n, rng)[0], pattern) for _ in range(samples)])
    ratios = blocks / n
    p01 = float(np.percentile(ratios, 1))
    ok = blocks.min() >= 1 and p01 > 0
    record(10, ok, f"min blocks {blocks.min()}, mean blocks/n {ratios.mean():.4f}, 1st percentile {p01:.4f}")
    assert ok


def _structure_stats(model, n, samples, seed):
    rng = RandomSource(seed)
    root = math.sqrt(n)
    good = typical = 0
    for _ in range(samples):
        w = uniform_class_sample(model, n, rng)
        good += model.dominant_blocks_large(w) and model.nondominant_weight(w) <= root
        typical += model.is_typical(w, stop_at_first=True).typical
    return good / samples, typical / samples


def test_criterion_11_random_word_structure(poly):
    large400, typ400 = _structure_stats(poly, 400, 1000, 400)
    _, typ200 = _structure_stats(poly, 200, 1000, 200)
    ok = large400 >= 0.9 and typ400 >= 0.5 and typ400 >= typ200
    record(11, ok, f"n=400: large blocks and small non-dominant weight {large400:.3f}, "
                   f"typical {typ400:.3f}; n=200 typical {typ200:.3f} (2KQ+1 = {2 * poly.K * poly.Q + 1})")
    assert ok


def test_criterion_12_theorem_consistency(layered, poly):
    lines = []
    ok = True
    for model, ks, name in ((layered, range(1, 6), "layered"), (poly, range(1, 5), "poly")):
        for k in ks:
            rep = verify_predictions(model, k, partition_horizon(model, k))
            ok &= rep.ok and rep.partition.exact and not rep.warnings
            lines.append(f"{name} k={k}: {len(rep.checks)} orbits")
    moves = sum(verify_predictions(poly, k, partition_horizon(poly, k)).count("move-waived") for k in range(1, 5))
    long_rep = verify_predictions(poly, 3, partition_horizon(poly, 3), move_sizes=[120], block_threshold=2)
    long_moves = long_rep.count("move-long")
    ok &= moves > 0 and long_moves > 0 and long_rep.ok
    col_l = collapse_report(layered, range(3, 8))
    col_p = collapse_report(poly, range(3, 9))
    for col in (col_l, col_p):
        ok &= all(r.ratio < 1 and r.exact for r in col.rows) and col.non_increasing
    record(12, ok, f"zero violations ({'; '.join(lines[-2:])}); {moves} short and {long_moves} long "
                   f"move instances; ratios layered {col_l.trend}, poly {col_p.trend}")
    assert ok
