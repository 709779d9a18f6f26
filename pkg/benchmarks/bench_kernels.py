"""Time the numba and numpy series kernels on the same workloads.

    python3 benchmarks/bench_kernels.py --repeat 200
"""

import argparse
import math
import time

from mllab import _kernels
from mllab._accel import HAVE_NUMBA

# (label, alpha, beta, gamma, q, poch, z)
# the alternating case loses digits to cancellation in both kernels; eval_ml
# hands such points to mpmath
CASES = [
    ("exp z=1", 1.0, 1.0, 1.0, 1.0, False, 1.0),
    ("cosh-like z=30", 2.0, 1.0, 1.0, 1.0, False, 30.0),
    ("alpha=0.5 z=20", 0.5, 1.0, 1.0, 1.0, False, 20.0),
    ("prabhakar z=10", 1.0, 2.5, 2.5, 1.0, True, 10.0),
    ("four-param q=2 z=5", 2.0, 1.5, 0.5, 2.0, True, 5.0),
    ("alternating z=-10", 1.0, 1.0, 1.0, 1.0, False, -10.0),
]


def run(fn, case, repeat):
    _, a, b, g, q, poch, z = case
    args = (a, b, g, q, poch, 0.0, z, 0, 1e-14, 1e-300, 10_000, 3, True)
    out = fn(*args)
    t0 = time.perf_counter()
    for _ in range(repeat):
        fn(*args)
    return (time.perf_counter() - t0) / repeat, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=200)
    args = ap.parse_args()
    if not HAVE_NUMBA:
        print("numba is not installed; only the numpy kernel can run")
        return
    t0 = time.perf_counter()
    run(_kernels.series_sum_numba, CASES[0], 1)
    print(f"numba first call (compile or cache load): {time.perf_counter() - t0:.3f} s")
    print(f"{'case':<22} {'terms':>6} {'numba us':>10} {'numpy us':>10} {'speedup':>8} {'rel diff':>10}")
    for case in CASES:
        tn, on = run(_kernels.series_sum_numba, case, args.repeat)
        tp, op = run(_kernels.series_sum_numpy, case, args.repeat)
        vn = on[1] * math.exp(on[0])
        vp = op[1] * math.exp(op[0])
        diff = abs(vn - vp) / max(abs(vp), 1e-300)
        print(f"{case[0]:<22} {on[6]:>6} {tn * 1e6:>10.1f} {tp * 1e6:>10.1f} "
              f"{tp / tn:>7.1f}x {diff:>10.2e}")


if __name__ == "__main__":
    main()
