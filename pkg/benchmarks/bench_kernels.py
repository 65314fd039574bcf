"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--size 1000] [--repeat 3]
"""
import argparse
import timeit

import numpy as np

from fractions import Fraction

from subshift_lab import kernels
from subshift_lab.complexity import complexity_table
from subshift_lab.core import Alphabet, Window, rect_codes
from subshift_lab.generators import ExactRational, SturmianVertical, TimesPQ, generate
from subshift_lab.periodicity import period_vectors

KERNEL_NAMES = ("occurrences", "dense_labels", "count_distinct", "shift_agrees", "label_counts")


def cases(size, rng):
    grid = rng.integers(0, 2, (size, size)).astype(np.uint8)
    codes, _ = rect_codes(grid, 2, 4, 4)
    wide = rng.integers(0, 1 << 40, (size, size)).astype(np.int64)
    mid = rng.integers(0, 1 << 10, (size, size)).astype(np.int64)
    pat = grid[5:8, 7:10].copy()
    periodic = np.tile(rng.integers(0, 2, (3, 4)), (size // 3 + 1, size // 4 + 1))[:size, :size].astype(np.uint8)
    return {
        "occurrences 3x3": lambda k: k.occurrences(grid, pat),
        "count_distinct 4x4 codes": lambda k: k.count_distinct(codes),
        "count_distinct wide labels (numpy sort)": lambda k: k.count_distinct(wide),
        "label_counts 4x4 codes": lambda k: k.label_counts(codes.ravel()),
        "dense_labels 10-bit pairs": lambda k: k.dense_labels(mid, mid[::-1]),
        "dense_labels 40-bit pairs (numpy sort)": lambda k: k.dense_labels(wide, wide[::-1]),
        "shift_agrees (periodic, full scan)": lambda k: k.shift_agrees(periodic, 4, 3),
        "shift_agrees (random, early exit)": lambda k: k.shift_agrees(grid, 1, 0),
    }


def pipelines():
    stu = generate(SturmianVertical(Fraction(377, 610)), 2000, 40)
    atom = generate(TimesPQ(2, 3, ExactRational(Fraction(1, 5))), 400, 400)
    noise = np.random.default_rng(1).integers(0, 2, (400, 400)).astype(np.uint8)
    noise = Window(noise, Alphabet.from_string("01"))
    return {
        "complexity_table 2000x40, 30x30": lambda: complexity_table(stu, 30, 30),
        "complexity_table 400x400 noise, 12x12": lambda: complexity_table(noise, 12, 12),
        "period_vectors 400x400 atomic, shift 20": lambda: period_vectors(atom, 20),
    }


def use_backend(module):
    for name in KERNEL_NAMES:
        setattr(kernels, name, getattr(module, name))


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--size", type=int, default=1000, help="side of the square test grids")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    py = kernels.get_backend("python")
    try:
        cy = kernels.get_backend("cython")
    except ImportError:
        cy = None
        print("compiled extension not built; timing the numpy fallback only")

    rng = np.random.default_rng(args.seed)
    print(f"grid {args.size}x{args.size}, best of {args.repeat}")
    print(f"{'kernel':38s} {'python [ms]':>12s} {'cython [ms]':>12s} {'speedup':>8s}")
    for name, fn in cases(args.size, rng).items():
        t_py = min(timeit.repeat(lambda: fn(py), number=1, repeat=args.repeat)) * 1e3
        if cy is None:
            print(f"{name:38s} {t_py:12.2f} {'-':>12s} {'-':>8s}")
            continue
        t_cy = min(timeit.repeat(lambda: fn(cy), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:38s} {t_py:12.2f} {t_cy:12.2f} {t_py / t_cy:8.1f}x")

    print()
    print(f"{'pipeline':38s} {'python [ms]':>12s} {'cython [ms]':>12s} {'speedup':>8s}")
    for name, fn in pipelines().items():
        use_backend(py)
        t_py = min(timeit.repeat(fn, number=1, repeat=args.repeat)) * 1e3
        if cy is None:
            print(f"{name:38s} {t_py:12.2f} {'-':>12s} {'-':>8s}")
            continue
        use_backend(cy)
        t_cy = min(timeit.repeat(fn, number=1, repeat=args.repeat)) * 1e3
        print(f"{name:38s} {t_py:12.2f} {t_cy:12.2f} {t_py / t_cy:8.1f}x")


if __name__ == "__main__":
    main()
