"""Time the numba kernels against their pure-numpy counterparts.

Usage::

    python benchmarks/bench_kernels.py [--repeat 5]

Each kernel runs once untimed (JIT warm-up), then ``--repeat`` times; the
best wall time is reported together with a check that both backends agree.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from binarytails import _kernels as K


def best_time(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - start)
    return min(times), result


def cases():
    p = np.full(32, 0.37)
    w = np.arange(1, 2_000_001, dtype=float) ** 0.6
    return [
        ("theta_scan_power (n <= 2e6)",
         lambda: K.theta_scan_power_nb(3000.0, 0.6, 1, 2_000_000),
         lambda: K.theta_scan_power_np(3000.0, 0.6, 1, 2_000_000)),
        ("theta_scan_values (n <= 2e6)",
         lambda: K.theta_scan_values_nb(3000.0, w, 1),
         lambda: K.theta_scan_values_np(3000.0, w, 1)),
        ("sim_hits (2e5 samples x 32)",
         lambda: K.sim_hits_nb(p, 14.0, 7, 0, 200_000),
         lambda: K.sim_hits_np(p, 14.0, 7, 0, 200_000)),
        ("upper_tail (n = 1e4)",
         lambda: K.upper_tail_nb(10_000, 0.5, 5_050),
         lambda: K.upper_tail_np(10_000, 0.5, 5_050)),
    ]


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    print(f"{'kernel':32s} {'numba [s]':>11s} {'numpy [s]':>11s} {'speedup':>8s}  agree")
    for name, nb, npy in cases():
        t_nb, r_nb = best_time(nb, args.repeat)
        t_np, r_np = best_time(npy, args.repeat)
        agree = np.allclose(np.asarray(r_nb, dtype=float), np.asarray(r_np, dtype=float), rtol=1e-12)
        print(f"{name:32s} {t_nb:11.5f} {t_np:11.5f} {t_np / t_nb:8.1f}  {agree}")


if __name__ == "__main__":
    main()
