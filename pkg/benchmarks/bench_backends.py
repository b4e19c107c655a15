"""Compare the numba and pure-numpy kernel paths.

    python benchmarks/bench_backends.py            # kernel micro-benchmarks + one simulation cell each
    python benchmarks/bench_backends.py --size 2000000 --repeat 5

The end-to-end cell runs in a subprocess per backend so the env flag is read
fresh at import time.
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from homefield import kernels


def best_of(fn, repeat):
    fn()  # warm-up, includes JIT compilation for numba
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


CELL = (
    "import time; from homefield.simulation import SimulationConfig, run_simulation;"
    "run_simulation(SimulationConfig(1, 10, 1.0, replicates=5));"
    "t = time.perf_counter(); run_simulation(SimulationConfig(1, {n}, 1.0, replicates={reps}));"
    "print(time.perf_counter() - t)"
)


def cell_seconds(disable_numba, n, reps):
    env = dict(os.environ)
    if disable_numba:
        env["HOMEFIELD_DISABLE_NUMBA"] = "1"
    else:
        env.pop("HOMEFIELD_DISABLE_NUMBA", None)
    out = subprocess.run(
        [sys.executable, "-c", CELL.format(n=n, reps=reps)], env=env, capture_output=True, text=True, check=True
    )
    return float(out.stdout.strip())


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--size", type=int, default=1_000_000, help="vector length for cdf/quantile")
    ap.add_argument("--teams", type=int, default=80)
    ap.add_argument("--reps", type=int, default=300, help="replicates in the end-to-end cell")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    x = rng.normal(0, 2, args.size)
    p = rng.uniform(size=args.size)
    y = rng.normal(size=(args.teams, args.teams))
    pi, pj, s = kernels.numpy_impl["pair_sums"](y)
    beta = rng.normal(size=args.teams)
    n = args.teams

    cases = {
        f"ndtr ({args.size:,})": lambda impl: impl["ndtr"](x),
        f"ndtri ({args.size:,})": lambda impl: impl["ndtri"](p),
        f"pair_sums (n={n})": lambda impl: impl["pair_sums"](y),
        f"team_totals (n={n})": lambda impl: impl["team_totals"](n, pi, pj, s),
        f"pair_residuals (n={n})": lambda impl: impl["pair_residuals"](beta, pi, pj, s),
    }
    print(f"{'kernel':<28}{'numba [s]':>12}{'numpy [s]':>12}{'speedup':>10}")
    for name, call in cases.items():
        t_nb = best_of(lambda: call(kernels.numba_impl), args.repeat)
        t_np = best_of(lambda: call(kernels.numpy_impl), args.repeat)
        print(f"{name:<28}{t_nb:>12.5f}{t_np:>12.5f}{t_np / t_nb:>9.1f}x")

    t_nb = cell_seconds(False, args.teams, args.reps)
    t_np = cell_seconds(True, args.teams, args.reps)
    label = f"cell n={args.teams} R={args.reps}"
    print(f"{label:<28}{t_nb:>12.3f}{t_np:>12.3f}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
