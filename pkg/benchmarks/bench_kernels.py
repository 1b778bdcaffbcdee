"""Benchmark the compiled scan kernels against the pure-Python twins.

Run:  python benchmarks/bench_kernels.py [--size N] [--bound B] [--repeat R]

Times star_scan on an all-pass instance (no early exit, so the full
exponent/point space is scanned) and compat_scan on a conflict-free pair,
then prints the per-call times and the speedup.
"""

from __future__ import annotations

import argparse
import random
import time

from perdec import _kernels_py as pure
from perdec.core import power_table

try:
    from perdec import _kernels as compiled
except ImportError:
    compiled = None


def build_star_case(rng: random.Random, size: int, bound: int):
    # two commuting translations plus one random power keeps premises rich
    a, b = rng.randrange(1, size), rng.randrange(1, size)
    t0 = tuple((x + a) % size for x in range(size))
    t1 = tuple((x + b) % size for x in range(size))
    t2 = tuple((x + a + b) % size for x in range(size))
    maps = (t0, t1, t2)
    pow_tables = [power_table(m, bound) for m in maps]
    heads = [0, 1]
    members = [(2,), ()]
    kmax = [bound, 1]
    # zero function: every gated conclusion vanishes, so nothing short-circuits
    f_num = [0] * size
    return pow_tables, heads, members, kmax, 0, bound, f_num


def build_compat_case(rng: random.Random, size: int, bound: int):
    a = rng.randrange(1, size)
    t0 = tuple((x + a) % size for x in range(size))
    t1 = tuple((x + 2 * a) % size for x in range(size))
    pa, pb = power_table(t0, bound), power_table(t1, bound)
    f_num = [17] * size
    return pa, pb, f_num, bound, True


def timeit(fn, args, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - start)
        assert out is None, "benchmark cases must scan to completion"
    return best


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--size", type=int, default=48)
    parser.add_argument("--bound", type=int, default=96)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    rng = random.Random(args.seed)

    star_args = build_star_case(rng, args.size, args.bound)
    compat_args = build_compat_case(rng, args.size, args.bound)

    pure_star = timeit(pure.star_scan, star_args, args.repeat)
    pure_compat = timeit(pure.compat_scan, compat_args, args.repeat)
    print(f"star_scan   pure:     {pure_star * 1000:9.2f} ms")
    print(f"compat_scan pure:     {pure_compat * 1000:9.2f} ms")
    if compiled is None:
        print("compiled kernels unavailable (built with PERDEC_NO_EXT?)")
        return
    comp_star = timeit(compiled.star_scan, star_args, args.repeat)
    comp_compat = timeit(compiled.compat_scan, compat_args, args.repeat)
    print(f"star_scan   compiled: {comp_star * 1000:9.2f} ms"
          f"   ({pure_star / comp_star:5.1f}x)")
    print(f"compat_scan compiled: {comp_compat * 1000:9.2f} ms"
          f"   ({pure_compat / comp_compat:5.1f}x)")


if __name__ == "__main__":
    main()
