"""Compare the compiled kernels with their numpy twins.

    python benchmarks/bench_kernels.py [--repeat 5]

Each case is run on both backends, outputs are checked for bitwise equality,
and the best-of-``repeat`` wall time is reported.
"""
from __future__ import annotations

import argparse
import math
import time

import numpy as np

from resolvability.kernels import get_backend


def merge_case(size: int):
    rng = np.random.default_rng(0)
    # many near-duplicates so the anchor scan actually runs
    base = np.sort(rng.normal(size=size // 4))
    values = np.sort(np.concatenate([base + j * 3e-10 for j in range(4)]))
    probs = np.full(values.size, 1.0 / values.size)
    return (values, probs, 1e-9), f"merge {values.size} atoms"


def multinomial_case(n: int, k: int):
    rng = np.random.default_rng(1)
    v = rng.normal(size=k)
    logp = np.log(rng.dirichlet(np.ones(k)))
    lg = np.array([math.lgamma(i + 1) for i in range(n + 1)])
    count = math.comb(n + k - 1, k - 1)
    return (v, logp, lg, n, count), f"type classes n={n} k={k} ({count} atoms)"


def multiset_case(K: int, M: int, Y: int):
    rng = np.random.default_rng(2)
    rows = rng.dirichlet(np.ones(Y), size=K)
    tgt = rng.dirichlet(np.ones(Y))
    count = math.comb(K + M - 1, M)
    return (rows, tgt, M, count), f"code search K={K} M={M} ({count} multisets)"


CASES = [
    ("merge_sorted_atoms", merge_case, (200_000,)),
    ("multinomial_atoms", multinomial_case, (10_000, 2)),
    ("multinomial_atoms", multinomial_case, (120, 4)),
    ("multiset_distances", multiset_case, (16, 6, 16)),
    ("multiset_distances", multiset_case, (8, 10, 8)),
]


def best_time(fn, args, repeat: int):
    best, out = math.inf, None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def same(a, b) -> bool:
    if isinstance(a, tuple):
        return all(np.array_equal(x, y) for x, y in zip(a, b))
    return np.array_equal(a, b)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    py = get_backend("python")
    try:
        cy = get_backend("cython")
    except ImportError:
        raise SystemExit("compiled backend not built; run `pip install -e . --no-build-isolation`")
    print(f"{'case':<44} {'cython':>10} {'python':>10} {'speedup':>8}  equal")
    for name, make, params in CASES:
        call_args, label = make(*params)
        tc, oc = best_time(getattr(cy, name), call_args, args.repeat)
        tp, op = best_time(getattr(py, name), call_args, args.repeat)
        print(f"{label:<44} {tc * 1e3:>8.2f}ms {tp * 1e3:>8.2f}ms {tp / tc:>7.1f}x  {same(oc, op)}")


if __name__ == "__main__":
    main()
