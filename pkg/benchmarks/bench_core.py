"""Compare the compiled and numpy backends on symbol-grid workloads.

Usage: python3 benchmarks/bench_core.py [--repeat 5] [--points 101]
"""
import argparse
import math
import timeit

import numpy as np

from csquant import Parameters, _core
from csquant._core import _slow
from csquant.symbols import default_grid, levels_needed


def workload(theta, n_points):
    P = Parameters(theta=theta)
    qv, pv = default_grid(P, 32, n_points, n_points)
    Q, Pm = np.meshgrid(qv, pv, indexing="ij")
    q, p = Q.ravel(), Pm.ravel()
    return q, p, levels_needed(p, P, 1e-16), P


def bench(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--points", type=int, default=101)
    args = ap.parse_args()
    if _core.fast is None:
        print("compiled backend not built; only the numpy backend is available")
    backends = [("numpy", _slow)] + ([("cython", _core.fast)] if _core.fast is not None else [])

    print(f"{'kernel':<16}{'theta':>6}{'levels':>8}" + "".join(f"{name:>12}" for name, _ in backends) + f"{'speedup':>10}")
    for theta in (0.2, 1.0, 5.0):
        q, p, n_max, P = workload(theta, args.points)
        a, L, rho = P.momentum_quantum, P.length, P.rho
        for label, call in (
            ("well_sums", lambda m: m.well_sums(q, p, n_max, rho, a, L)),
            ("well_pair_sums", lambda m: m.well_pair_sums(q, p, n_max, rho, a, L, 0.0)),
            ("pair_sums(t)", lambda m: m.well_pair_sums(q, p, n_max, rho, a, L, 0.3)),
        ):
            times = [bench(lambda m=m: call(m), args.repeat) for _, m in backends]
            speed = f"{times[0] / times[1]:9.1f}x" if len(times) > 1 else ""
            print(f"{label:<16}{theta:>6g}{n_max:>8d}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times) + f"{speed:>10}")
    if len(backends) > 1:
        q, p, n_max, P = workload(1.0, 21)
        ref = _slow.well_pair_sums(q, p, n_max, P.rho, 1.0, math.pi)
        got = _core.fast.well_pair_sums(q, p, n_max, P.rho, 1.0, math.pi)
        print(f"max backend difference: {max(np.max(np.abs(x - y)) for x, y in zip(ref, got)):.2e}")


if __name__ == "__main__":
    main()
