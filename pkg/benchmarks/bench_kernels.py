"""Time the compiled and pure-Python containment kernels on random pattern/text pairs.

    python3 benchmarks/bench_kernels.py --pairs 2000 --k 5 --n 40
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from wilfcollapse import _pykernels

try:
    from wilfcollapse import _ckernels
except ImportError:
    _ckernels = None


def random_perm(rng, n):
    return tuple(int(x) + 1 for x in rng.permutation(n))


def bench(fn, pairs, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        hits = sum(1 for p, t in pairs if fn(p, t))
        best = min(best, time.perf_counter() - t0)
    return best, hits


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pairs", type=int, default=2000)
    ap.add_argument("--k", type=int, default=5, help="pattern length")
    ap.add_argument("--n", type=int, default=40, help="text length")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(args.seed)
    pairs = [(random_perm(rng, args.k), random_perm(rng, args.n)) for _ in range(args.pairs)]
    py_t, py_hits = bench(_pykernels.contains, pairs, args.repeat)
    print(f"pairs={args.pairs} k={args.k} n={args.n} seed={args.seed}")
    print(f"python  {py_t * 1e3:9.2f} ms  ({py_hits} contained)")
    if _ckernels is None:
        print("cython  unavailable (extension not built)")
        return
    c_t, c_hits = bench(_ckernels.contains, pairs, args.repeat)
    if c_hits != py_hits:
        raise SystemExit(f"backends disagree: {c_hits} vs {py_hits}")
    print(f"cython  {c_t * 1e3:9.2f} ms  ({c_hits} contained)")
    print(f"speedup {py_t / c_t:9.1f}x")


if __name__ == "__main__":
    main()
