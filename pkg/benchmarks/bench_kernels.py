"""Benchmark the hot kernels: numba JIT lane vs interpreted fallback.

Usage:
    python benchmarks/bench_kernels.py            # times both lanes
    python benchmarks/bench_kernels.py --lane current   # just this lane

Lane selection happens at import time via UWBAG_DISABLE_JIT, so the
two-lane comparison re-runs this script in a subprocess with the flag
set.  Both lanes produce bit-identical output (tests/test_lane_parity.py);
the benchmark shows what the compilation buys.
"""

import argparse
import json
import os
import subprocess
import sys
import time


def run_current_lane(n_scans: int, n_clean: int) -> dict:
    import numpy as np

    from uwbag import kernels
    from uwbag.analysis import clean_deconvolve, estimate_sv_params
    from uwbag.catalog import SVParams
    from uwbag.rng import scan_stream
    from uwbag.svmodel import synthesize_cir

    params = SVParams(n_c_mean=3.33, chi=0.033, varsigma=0.1, eta=0.23, gamma=8.7)

    # warm-up triggers JIT compilation so it is not timed below
    synthesize_cir(params, scan_stream(0, 0))

    t0 = time.perf_counter()
    scans = [synthesize_cir(params, scan_stream(1, i)) for i in range(n_scans)]
    t_synth = time.perf_counter() - t0

    t0 = time.perf_counter()
    estimate_sv_params(scans)
    t_est = time.perf_counter() - t0

    dt = 0.06
    template = np.exp(-0.5 * ((np.arange(34) * dt - 1.0) / 0.25) ** 2)
    raw = np.zeros(1667)
    rng = np.random.default_rng(3)
    for pos in rng.integers(0, 1500, size=12):
        raw[pos : pos + 34] += rng.uniform(0.2, 1.0) * template[: min(34, 1667 - pos)]
    clean_deconvolve(raw.copy(), template, dt)  # warm-up
    t0 = time.perf_counter()
    for _ in range(n_clean):
        clean_deconvolve(raw.copy(), template, dt)
    t_clean = (time.perf_counter() - t0) / n_clean

    return {
        "lane": "jit" if kernels.JIT_ENABLED else "interpreted",
        "synthesize_scans_per_s": n_scans / t_synth,
        "estimate_s": t_est,
        "clean_s_per_call": t_clean,
    }


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--lane", choices=["both", "current"], default="both")
    parser.add_argument("--scans", type=int, default=5000)
    parser.add_argument("--clean-reps", type=int, default=5)
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    args = parser.parse_args()

    if args.lane == "current":
        result = run_current_lane(args.scans, args.clean_reps)
        print(json.dumps(result))
        return 0

    results = []
    for disable in ("0", "1"):
        env = dict(os.environ, UWBAG_DISABLE_JIT=disable)
        out = subprocess.run(
            [sys.executable, __file__, "--lane", "current",
             "--scans", str(args.scans), "--clean-reps", str(args.clean_reps)],
            env=env,
            check=True,
            capture_output=True,
            text=True,
        )
        results.append(json.loads(out.stdout.strip().splitlines()[-1]))

    if args.json:
        print(json.dumps(results, indent=2))
        return 0

    jit, py = results
    print(f"workload: {args.scans} scan syntheses + ensemble estimate + CLEAN on 1667 samples")
    print(f"{'kernel':<28}{'jit lane':>14}{'interpreted':>14}{'speedup':>10}")
    r = jit["synthesize_scans_per_s"] / py["synthesize_scans_per_s"]
    print(f"{'synthesize (scans/s)':<28}{jit['synthesize_scans_per_s']:>14.0f}{py['synthesize_scans_per_s']:>14.0f}{r:>9.1f}x")
    r = py["estimate_s"] / jit["estimate_s"]
    print(f"{'estimate ensemble (s)':<28}{jit['estimate_s']:>14.3f}{py['estimate_s']:>14.3f}{r:>9.1f}x")
    r = py["clean_s_per_call"] / jit["clean_s_per_call"]
    print(f"{'clean deconvolve (s/call)':<28}{jit['clean_s_per_call']:>14.4f}{py['clean_s_per_call']:>14.4f}{r:>9.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
