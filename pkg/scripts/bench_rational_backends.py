#!/usr/bin/env python3
"""Compare exact-rational backends on a Gaussian-elimination workload.

The package's exact LP verification spends nearly all of its time in
rational pivoting, so a dense elimination over random small rationals
is a representative benchmark. Run with gmpy2 installed to see both
backends; otherwise only Fraction is timed.
"""

import argparse
import random
import time
from fractions import Fraction


def eliminate(matrix):
    m = [row[:] for row in matrix]
    rows, cols = len(m), len(m[0])
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == rows:
            break
    return m


def bench(make, size, seed, repeats):
    rng = random.Random(seed)
    raw = [
        [(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(size + 1)]
        for _ in range(size)
    ]
    matrix = [[make(n, d) for n, d in row] for row in raw]
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        eliminate(matrix)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--size", type=int, default=60, help="matrix rows")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    backends = {"fraction": Fraction}
    try:
        from gmpy2 import mpq

        backends["gmpy2"] = mpq
    except ImportError:
        print("gmpy2 not installed; timing Fraction only")

    results = {
        name: bench(make, args.size, args.seed, args.repeats)
        for name, make in backends.items()
    }
    for name, seconds in sorted(results.items(), key=lambda kv: kv[1]):
        print(f"{name:10s} {seconds * 1000:10.1f} ms")
    if len(results) == 2:
        ratio = results["fraction"] / results["gmpy2"]
        print(f"gmpy2 speedup: {ratio:.1f}x")


if __name__ == "__main__":
    main()
