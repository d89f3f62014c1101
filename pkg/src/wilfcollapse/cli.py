"""Command-line front end.

Every subcommand takes ``--class FILE`` (a JSON class description) and writes JSON
or CSV to standard output or ``--out``. Exit status is 0 on success, 1 on bad input
and 2 when an internal consistency check fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings

from .automaton import ClassSpecError, load_class
from .perm import Permutation, avoids, permutations_of
from .sampler import RandomSource, build_sampler, boltzmann_sample, empirical_suite, uniform_class_sample
from .words import PERMUTATION, check_quotient_identity, series_I, series_I_star, validate_embedding_order
from .wilf import avoider_series, collapse_report, partition_horizon, verify_predictions, wilf_partition

COMMANDS = ("automaton", "growth", "count", "series", "avoid", "wilf", "orbits", "sample", "stats", "validate")


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--class", dest="class_path", required=True, metavar="FILE", help="class description (JSON)")
    common.add_argument("--max", type=int, default=None, metavar="N", help="largest size or series cutoff")
    common.add_argument("--size", default=None, metavar="K", help="pattern or sample size; a range A..B where allowed")
    common.add_argument("--pattern", default=None, metavar="P", help="permutation or dotted word, e.g. 132 or 21.1")
    common.add_argument("--samples", type=int, default=1000, metavar="M")
    common.add_argument("--seed", type=int, default=0, metavar="S")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", default=None, metavar="PATH")
    parser = _Parser(prog="wilfcollapse", description="Wilf classes and growth of permutation classes.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    helps = {
        "automaton": "dump prefix and suffix state graphs",
        "growth": "per-state growth data, gamma and D",
        "count": "class counts c_1..c_N",
        "series": "I_W and I*_W series with the quotient identity",
        "avoid": "avoider counts for one pattern",
        "wilf": "Wilf partition of C_K, or the collapse table over a range",
        "orbits": "check predicted equivalences against the observed partition",
        "sample": "uniform random class words",
        "stats": "empirical statistics of random words",
        "validate": "embedding-order and counting cross-checks",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


# -- helpers ---------------------------------------------------------------------------


def _need(value, flag: str):
    if value is None:
        raise InputError(f"{flag} is required for this command")
    return value


def _size_range(text: str) -> list[int]:
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return list(range(int(lo), int(hi) + 1))
        return [int(text)]
    except ValueError:
        raise InputError(f"bad --size {text!r}") from None


def _pattern(model, text: str):
    """A permutation for permutation classes unless given in dotted word form."""
    if model.alphabet.mode == PERMUTATION and "." not in text:
        return Permutation.parse(text)
    return model.alphabet.parse_word(text)


def _word(model, text: str):
    if model.alphabet.mode == PERMUTATION and "." not in text:
        return model.alphabet.word_of(Permutation.parse(text))
    return model.alphabet.parse_word(text)


def _csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


# -- subcommands -------------------------------------------------------------------------


def cmd_automaton(model, args) -> str:
    d = model.to_dict()
    if args.format == "json":
        return _json(d)
    rows = [("side", "state", "loop", "gamma", "dominant", "witness")]
    for side in ("prefix", "suffix"):
        for st in d[f"{side}_states"]:
            rows.append((side, ".".join(map(str, st["state"])) or "()", " ".join(st["loop"]),
                         f"{st['gamma']:.12g}", str(st["dominant"]).lower(), st["witness"]))
    return _csv(rows)


def cmd_growth(model, args) -> str:
    n = args.max if args.max is not None else 10
    dom = model.dominance
    counts = model.counts(n)
    states = []
    for side, growths in (("prefix", model.prefix_growth), ("suffix", model.suffix_growth)):
        domset = dom.prefix_dominant if side == "prefix" else dom.suffix_dominant
        for st, g in growths.items():
            states.append({"side": side, "state": list(st), "rho": None if math.isinf(g.rho) else g.rho,
                           "gamma": g.gamma, "c": g.c, "dominant": st in domset})
    if args.format == "json":
        return _json({"gamma": dom.gamma, "D": dom.D, "states": states,
                      "counts": [{"n": i, "c_n": counts[i]} for i in range(1, n + 1)]})
    rows = [("side", "state", "rho", "gamma", "c", "dominant")]
    for s in states:
        rows.append((s["side"], ".".join(map(str, s["state"])) or "()", s["rho"], s["gamma"], s["c"],
                     str(s["dominant"]).lower()))
    return _csv(rows)


def cmd_count(model, args) -> str:
    n = _need(args.max, "--max")
    counts = model.counts(n)
    if args.format == "json":
        return _json({"counts": [{"n": i, "c_n": counts[i]} for i in range(1, n + 1)]})
    return _csv([("n", "c_n"), *((i, counts[i]) for i in range(1, n + 1))])


def cmd_series(model, args) -> str:
    w = _word(model, _need(args.pattern, "--pattern"))
    n = _need(args.max, "--max")
    a = model.alphabet
    i_w = series_I(a, w, n)
    i_star = series_I_star(a, w, n)
    ok = check_quotient_identity(a, w, n, method="dp")
    if not ok:
        raise AssertionError(f"quotient identity fails for {w}")
    if args.format == "json":
        return _json({"word": str(w), "cutoff": n, "I": list(i_w), "I_star": list(i_star),
                      "quotient_identity": ok})
    return _csv([("degree", "I", "I_star"), *((d, i_w[d], i_star[d]) for d in range(n + 1))])


def cmd_avoid(model, args) -> str:
    pi = _pattern(model, _need(args.pattern, "--pattern"))
    sig = avoider_series(model, pi, _need(args.max, "--max"))
    ns = range(sig.k, sig.N + 1)
    if args.format == "json":
        return _json({"pattern": str(sig.pattern), "k": sig.k, "N": sig.N, "exact": sig.exact,
                      "n_exact": sig.n_exact, "counts": [{"n": n, "a_n": sig.a(n)} for n in ns]})
    return _csv([("n", "a_n"), *((n, sig.a(n)) for n in ns)])


def cmd_wilf(model, args) -> str:
    sizes = _size_range(_need(args.size, "--size"))
    N = args.max
    if args.format == "csv":
        return _csv(collapse_report(model, sizes, N).csv_rows())
    parts = []
    for k in sizes:
        horizon = N if N is not None else partition_horizon(model, k)
        parts.append(wilf_partition(model, k, max(horizon, k)).to_dict())
    return _json(parts[0] if len(parts) == 1 else parts)


def cmd_orbits(model, args) -> str:
    sizes = _size_range(_need(args.size, "--size"))
    reports = []
    for k in sizes:
        N = args.max if args.max is not None else partition_horizon(model, k)
        reports.append(verify_predictions(model, k, max(N, k)))
    bad = [r for r in reports if not r.ok]
    if args.format == "json":
        out = _json([r.to_dict() for r in reports] if len(reports) > 1 else reports[0].to_dict())
    else:
        rows = [("k", "kind", "members", "blocks", "consistent", "exact")]
        for r in reports:
            for c in r.checks:
                rows.append((r.k, c.kind, " ".join(map(str, c.members)), " ".join(map(str, c.blocks)),
                             str(c.consistent).lower(), str(c.exact).lower()))
        out = _csv(rows)
    if bad:
        raise AssertionError(f"predicted orbit splits at an exact horizon for k = {[r.k for r in bad]}")
    return out


def cmd_sample(model, args) -> str:
    n = int(_need(args.size, "--size"))
    rng = RandomSource(args.seed)
    words = []
    if model.sum_closed:
        sm = build_sampler(model.alphabet)
        for _ in range(args.samples):
            words.append(boltzmann_sample(sm, n, rng)[0])
    else:
        words = [uniform_class_sample(model, n, rng) for _ in range(args.samples)]
    perm_mode = model.alphabet.mode == PERMUTATION
    if args.format == "json":
        return _json({"seed": args.seed, "n": n,
                      "samples": [{"word": str(w), "perm": str(w.perm()) if perm_mode else None} for w in words]})
    rows = [("word", "perm")] + [(str(w), str(w.perm()) if perm_mode else "") for w in words]
    return f"# seed={args.seed}\n" + _csv(rows)


def cmd_stats(model, args) -> str:
    n = int(_need(args.size, "--size"))
    pats = [model.alphabet.parse_word(p) for p in args.pattern.split(",")] if args.pattern else []
    rep = empirical_suite(model, n, args.samples, RandomSource(args.seed), patterns=pats,
                          concentration_trials=min(args.samples, 1000))
    if args.format == "json":
        return _json({"seed": args.seed, "n": n, "samples": args.samples,
                      "records": [{"statistic": s, "n": m, "samples": k, "value": v} for s, m, k, v in rep.records],
                      "histograms": {name: [[v, c] for v, c in sorted(h.items())]
                                     for name, h in rep.histograms.items()}})
    out = f"# seed={args.seed}\n" + _csv(rep.csv_rows())
    for name, h in rep.histograms.items():
        out += f"# histogram {name}\n" + _csv([("value", "count"), *sorted(h.items())])
    return out


def _brute_counts(model, n: int) -> list[int] | None:
    if model.alphabet.mode != PERMUTATION or model.basis is None:
        return None
    return [sum(1 for p in permutations_of(m) if avoids(p, model.basis)) for m in range(n + 1)]


def cmd_validate(model, args) -> str:
    n = args.max if args.max is not None else 5
    order = validate_embedding_order(model.alphabet, n)
    brute = _brute_counts(model, min(n, 7))
    counts_ok = brute is None or brute == model.counts(len(brute) - 1)
    res = {"embedding_order": order.ok, "checked_pairs": order.checked_pairs,
           "order_detail": str(order), "counts_match_brute_force": counts_ok}
    out = _json(res) if args.format == "json" else _csv([("check", "value"), *res.items()])
    if not (order.ok and counts_ok):
        raise AssertionError(f"validation failed: {order}; counts match = {counts_ok}")
    return out


HANDLERS = {name: globals()[f"cmd_{name}"] for name in COMMANDS}


def _show_warning(message, category, filename, lineno, file=None, line=None):
    print(f"warning: {message}", file=sys.stderr)


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise InputError(f"missing command (one of {', '.join(COMMANDS)})")
        model = load_class(args.class_path)
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            warnings.showwarning = _show_warning
            text = HANDLERS[args.command](model, args)
    except (InputError, ClassSpecError, ValueError, KeyError, TypeError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 1
    except AssertionError as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
