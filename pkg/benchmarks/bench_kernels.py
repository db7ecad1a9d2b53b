"""Time each kernel under both implementations.

    python benchmarks/bench_kernels.py [--repeat 5]

The jitted loops are warmed up once before timing, so compile time is not
counted.
"""
import argparse
import timeit

import numpy as np

from greedyrelay.kernels import IMPLEMENTATIONS
from greedyrelay.simulator import SimState


def cases(rng):
    W = rng.dirichlet(np.ones(8), size=(4096, 64))
    qa, qb = rng.dirichlet(np.ones(4096)), rng.dirichlet(np.ones(64))
    n = 14
    g = rng.exponential(size=(n, n))
    p = rng.uniform(0.1, 2.0, size=n)
    w = np.array([0.25, 0.25, 0.5])
    tx = np.array([0b1010101, 0b11110000, 0b1], dtype=np.int64)
    table = IMPLEMENTATIONS["numpy"].awgn_fd_table(g, p, 1.0)
    r = np.full(n, 0.05)
    s = SimState.initial(8)
    D = np.array([(0xFF & ~(1 << i)) & 0b01010101 or 1 << ((i + 1) % 8) for i in range(8)], dtype=np.int64)
    states = rng.integers(0, 16, size=(400, 4)) | (1 << np.arange(4))
    assigns = rng.integers(0, 16, size=(300, 4)) & ~(1 << np.arange(4))
    return {
        "cmi_sum (4096x64x8)": ("cmi_sum", (W, qa, qb)),
        "awgn_fd_table (n=14)": ("awgn_fd_table", (g, p, 1.0)),
        "awgn_hd_table (n=14, K=3)": ("awgn_hd_table", (g, p, 1.0, w, tx)),
        "feasibility_scan (n=14)": ("feasibility_scan", (table, r, 1e-9)),
        "cover_step (n=8)": ("cover_step", (s.C, s.f, s.K, D, 0)),
        "expand_states (400x300, n=4)": ("expand_states", (states, assigns)),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    print(f"{'kernel':32s} {'numba [ms]':>12s} {'numpy [ms]':>12s} {'speedup':>8s}")
    for label, (name, argv) in cases(rng).items():
        times = {}
        for impl, mod in IMPLEMENTATIONS.items():
            fn = getattr(mod, name)
            fn(*argv)
            number = 1
            while timeit.timeit(lambda: fn(*argv), number=number) < 0.05:
                number *= 4
            best = min(timeit.repeat(lambda: fn(*argv), number=number, repeat=args.repeat))
            times[impl] = 1e3 * best / number
        print(f"{label:32s} {times['numba']:12.4f} {times['numpy']:12.4f} {times['numpy'] / times['numba']:8.1f}x")


if __name__ == "__main__":
    main()
