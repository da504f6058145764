"""Timing comparison: compiled mode-sweep core vs the numpy fallback.

Intercepts the matrices a real twistor-kernel computation hands to the
sweep, then times both implementations on identical inputs and checks
that they return identical nullity tables.

Usage: python3 benchmarks/bench_kernels.py [--repeat K]
"""

import argparse
import time

import numpy as np

from kspin import kernels, twistor

CASES = ((2, 1, 2), (3, 1, 2), (3, 2, 3), (4, 2, 2))


def capture_sweep_input(m, r, band):
    """Run twistor_kernel once, recording the arguments of the first sweep."""
    captured = {}
    original = twistor.modp_nullities

    def spy(g0, gs, modes, p):
        if not captured:
            captured["args"] = (g0.copy(), gs.copy(), modes.copy(), p)
        return original(g0, gs, modes, p)

    twistor.modp_nullities = spy
    try:
        twistor.twistor_kernel(m, r, band)
    finally:
        twistor.modp_nullities = original
    return captured["args"]


def best_of(func, args, repeat):
    times = []
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = func(*args)
        times.append(time.perf_counter() - t0)
    return min(times), result


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3,
                    help="timing repetitions per case (best is reported)")
    opts = ap.parse_args()

    have_compiled = kernels.IMPL == "compiled"
    print(f"active implementation: {kernels.IMPL}")
    if not have_compiled:
        print("compiled core unavailable; timing the fallback only\n")

    header = (f"{'case':<16} {'modes':>8} {'shape':>12} "
              f"{'pure [s]':>10} {'compiled [s]':>13} {'speedup':>8}")
    print(header)
    print("-" * len(header))
    for m, r, band in CASES:
        g0, gs, modes, p = capture_sweep_input(m, r, band)
        shape = f"{g0.shape[0]}x{g0.shape[1]}"
        t_pure, out_pure = best_of(kernels.pure_modp_nullities,
                                   (g0, gs, modes, p), opts.repeat)
        if have_compiled:
            t_comp, out_comp = best_of(kernels.modp_nullities,
                                       (g0, gs, modes, p), opts.repeat)
            if not np.array_equal(out_pure, out_comp):
                raise SystemExit(f"implementations disagree on m={m} r={r}")
            comp_col = f"{t_comp:13.4f}"
            speed_col = f"{t_pure / t_comp:7.1f}x"
        else:
            comp_col = f"{'n/a':>13}"
            speed_col = f"{'n/a':>8}"
        print(f"m={m} r={r} band={band}  {len(modes):>8} {shape:>12} "
              f"{t_pure:10.4f} {comp_col} {speed_col}")


if __name__ == "__main__":
    main()
