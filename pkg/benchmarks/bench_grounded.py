#!/usr/bin/env python3
"""Benchmark the grounded-labelling kernel: compiled extension vs pure Python.

Random attack graphs at increasing sizes, timed over repeated runs.  Both
backends are checked to agree on every generated graph before timing.
"""

import argparse
import random
import statistics
import time

from argudas import _kernel
from argudas._kernel import pure


def random_graph(rng, n, mean_degree=4.0):
    edges = set()
    target = int(n * mean_degree)
    while len(edges) < target:
        i, j = rng.randrange(n), rng.randrange(n)
        if i != j:
            edges.add((i, j))
    return sorted(edges)


def time_backend(fn, n, attacks, repeats):
    samples = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn(n, attacks)
        samples.append(time.perf_counter() - start)
    return min(samples), statistics.median(samples)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", type=int, nargs="+",
                        default=[100, 500, 2_000, 10_000, 50_000])
    parser.add_argument("--repeats", type=int, default=7)
    parser.add_argument("--seed", type=int, default=97)
    args = parser.parse_args()

    if _kernel.BACKEND != "compiled":
        print("note: compiled kernel not built; comparing pure against itself")
    rng = random.Random(args.seed)

    print(f"backend selected at import: {_kernel.BACKEND}")
    print(f"{'n':>8}  {'edges':>8}  {'pure (ms)':>12}  {'compiled (ms)':>14}  {'speedup':>8}")
    for n in args.sizes:
        attacks = random_graph(rng, n)
        assert _kernel.grounded_labels(n, attacks) == pure.grounded_labels(n, attacks)
        pure_best, _ = time_backend(pure.grounded_labels, n, attacks, args.repeats)
        fast_best, _ = time_backend(_kernel.grounded_labels, n, attacks, args.repeats)
        speedup = pure_best / fast_best if fast_best else float("inf")
        print(
            f"{n:>8}  {len(attacks):>8}  {pure_best * 1e3:>12.3f}  "
            f"{fast_best * 1e3:>14.3f}  {speedup:>7.1f}x"
        )


if __name__ == "__main__":
    main()
