#!/usr/bin/env python3
"""Benchmark the hot kernels: numba-compiled vs pure-numpy fallback.

Run without arguments to time both paths in subprocesses and print the
comparison; ``--inner <label>`` runs the workload in-process (used by the
outer driver, honoring SLOPE_NAV_NUMBA).

Workload per pass:
  * 20_000 metric root solves (batched)
  * 20_000 geodesic right-hand-side evaluations on the bell chart
  * one 16-direction unit time front on the bell
"""

import argparse
import json
import math
import os
import subprocess
import sys
import time

import numpy as np

N_SOLVES = 20_000
N_RHS = 20_000
N_FRONT_DIRECTIONS = 16


def run_workload(label: str) -> dict:
    import slope_nav as sn
    from slope_nav import kernels as K
    from slope_nav.trajectories import IntegrationOptions

    rng = np.random.default_rng(123)
    eta = rng.uniform(0.0, 1.0, N_SOLVES)
    b0 = np.where(eta <= 1 / 3, 1.0 / (1.0 - eta), 1.0 / (2.0 * eta))
    wind = rng.uniform(0.0, 0.95, N_SOLVES) * b0
    alpha = rng.uniform(0.2, 4.0, N_SOLVES)
    s = rng.uniform(-1.0, 1.0, N_SOLVES) * wind
    gbeta = s * alpha
    out = np.empty((N_SOLVES, 3))

    # warmup triggers JIT compilation where enabled
    K.solve_metric_batch(eta[:64], wind[:64], alpha[:64], gbeta[:64], out[:64])
    K.geodesic_rhs(K.CHART_GAUSS_POLAR, 1.5, 0.63, 1 / 3, 0.9, 0.1, 0.7, 0.2)

    t0 = time.perf_counter()
    bad = K.solve_metric_batch(eta, wind, alpha, gbeta, out)
    t_solve = time.perf_counter() - t0

    xs = rng.uniform(0.3, 2.5, N_RHS)
    ps = rng.uniform(0.0, 2 * math.pi, N_RHS)
    vs = rng.normal(size=(N_RHS, 2))
    t0 = time.perf_counter()
    acc = 0.0
    for i in range(N_RHS):
        a0, a1, _ = K.geodesic_rhs(
            K.CHART_GAUSS_POLAR, 1.5, 0.63, 1 / 3, xs[i], ps[i], vs[i, 0], vs[i, 1]
        )
        acc += a0
    t_rhs = time.perf_counter() - t0

    setup = sn.NavigationSetup(sn.gaussian_bell(1.5), 0.63, 1 / 3)
    t0 = time.perf_counter()
    front = sn.compute_time_front(
        setup,
        (1 / math.sqrt(2), -math.pi / 4),
        1.0,
        N_FRONT_DIRECTIONS,
        IntegrationOptions(n_samples=33),
    )
    t_front = time.perf_counter() - t0

    return {
        "label": label,
        "jit": sn.JIT_ENABLED,
        "solve_s": t_solve,
        "solve_us_each": t_solve / N_SOLVES * 1e6,
        "rhs_s": t_rhs,
        "rhs_us_each": t_rhs / N_RHS * 1e6,
        "front_s": t_front,
        "bad_solves": int(bad),
        "front_points": len(front.points),
    }


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--inner", default=None, help="run the workload in-process")
    args = parser.parse_args()

    if args.inner is not None:
        print(json.dumps(run_workload(args.inner)))
        return 0

    results = {}
    for label, flag in (("numba", "1"), ("numpy", "0")):
        env = dict(os.environ, SLOPE_NAV_NUMBA=flag)
        proc = subprocess.run(
            [sys.executable, os.path.abspath(__file__), "--inner", label],
            env=env,
            capture_output=True,
            text=True,
            check=True,
        )
        results[label] = json.loads(proc.stdout.strip().splitlines()[-1])

    print(f"{'stage':<28}{'numba':>12}{'numpy':>12}{'speedup':>10}")
    print("-" * 62)
    rows = [
        ("metric solve (us/call)", "solve_us_each"),
        ("geodesic rhs (us/call)", "rhs_us_each"),
        (f"{N_FRONT_DIRECTIONS}-direction front (s)", "front_s"),
    ]
    for name, key in rows:
        a, b = results["numba"][key], results["numpy"][key]
        print(f"{name:<28}{a:>12.3f}{b:>12.3f}{b / a:>9.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
