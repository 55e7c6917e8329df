"""Command-line front end.

Subcommands: synthesize, analyze, pathloss, estimate, catalog.  All
outputs are deterministic given the same flags/config (seeded streams,
fixed formatting), so repeated runs are byte-identical.  Exit codes:
0 success, 2 validation error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import analysis, catalog, fileio, pathloss, svmodel
from .antenna import Orientation, PolarizationState
from .catalog import Rx, Scenario, ScenarioKey
from .geometry import LinkGeometry, two_ray_geometry
from .rng import scan_stream


def _float_list(text: str) -> list[float]:
    try:
        values = [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return value


def _scenario_key(args) -> ScenarioKey:
    return ScenarioKey(
        scenario=Scenario(args.scenario),
        rx=Rx(args.rx),
        orientation=Orientation(args.orientation),
        x_m=float(args.x),
    )


def _merge_config(args) -> fileio.RunConfig:
    cfg = fileio.RunConfig()
    if args.config:
        cfg = fileio.RunConfig.from_json(Path(args.config).read_text())
    # explicit CLI flags override the config file
    if args.seed is not None:
        cfg.seed = args.seed
    if args.scans is not None:
        cfg.n_scans = args.scans
    if args.scenario is not None:
        cfg.scenario = args.scenario
    if args.rx is not None:
        cfg.rx = args.rx
    if args.orientation is not None:
        cfg.orientation = args.orientation
    if args.x is not None:
        cfg.x_m = float(args.x)
    if args.window_ns is not None:
        cfg.window_ns = args.window_ns
    if args.spacing_ns is not None:
        cfg.sample_spacing_ns = args.spacing_ns
    if args.decay_as_time_constant:
        cfg.decay_as_time_constant = True
    return cfg


def cmd_synthesize(args) -> int:
    cfg = _merge_config(args)
    if cfg.n_scans < 1:
        raise ValueError("--scans must be >= 1")
    key = ScenarioKey(
        scenario=Scenario(cfg.scenario),
        rx=Rx(cfg.rx),
        orientation=Orientation(cfg.orientation),
        x_m=cfg.x_m,
    )
    if args.params_json:
        row = json.loads(Path(args.params_json).read_text())
        _, params = catalog.params_from_row(dict(row, scenario=cfg.scenario, rx=cfg.rx,
                                                 orientation=cfg.orientation, x_m=cfg.x_m))
    else:
        params = catalog.catalog_lookup(key)
    scans = []
    n_clusters = 0
    n_taps = 0
    for i in range(cfg.n_scans):
        cir, starts, _ = svmodel.synthesize_cir_detail(
            params,
            scan_stream(cfg.seed, i),
            sample_spacing=cfg.sample_spacing_ns,
            window=cfg.window_ns,
            decay_as_time_constant=cfg.decay_as_time_constant,
            scenario=key,
        )
        n_clusters += starts.size
        n_taps += cir.n_taps
        scans.append(cir)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    out_path = out_dir / "cir.csv"
    fileio.write_cir_file(out_path, scans, seed=cfg.seed, scenario=key.describe())
    (out_dir / "run_config.json").write_text(cfg.to_json())
    print(
        f"wrote {out_path}: {cfg.n_scans} scans, "
        f"mean cluster count {n_clusters / cfg.n_scans:.2f}, "
        f"mean taps/scan {n_taps / cfg.n_scans:.2f}"
    )
    return 0


def cmd_analyze(args) -> int:
    scans, header = fileio.read_cir_file(args.cir_file)
    rule = analysis.ClusterRule(
        min_duration_ns=args.min_duration, min_drop_db=args.min_drop
    )
    pdp = analysis.compute_pdp(scans)
    smoothed = analysis.smooth_pdp(pdp, args.smooth_ns) if args.smooth_ns > 0 else pdp
    clusters = analysis.detect_clusters(smoothed, rule, args.dynamic_range)
    fit = analysis.fit_sv_piecewise(smoothed, clusters, args.dynamic_range)
    stats = analysis.channel_stats(scans)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    fileio.write_pdp_csv(out_dir / "pdp.csv", pdp, args.dynamic_range)
    fileio.write_clusters_csv(out_dir / "clusters.csv", clusters)
    fileio.write_stats_csv(out_dir / "stats.csv", stats, clusters, fit)
    k_text = "n/a (VH)" if stats.k_factor_db is None else f"{stats.k_factor_db:.2f} dB"
    print(
        f"analyzed {len(scans)} scans: {len(clusters)} clusters, "
        f"rms delay spread {stats.rms_ds_ns:.3f} ns, K-factor {k_text}"
    )
    print(f"wrote {out_dir / 'pdp.csv'}, {out_dir / 'clusters.csv'}, {out_dir / 'stats.csv'}")
    return 0


_MODEL_NAMES = {
    (Scenario.HOVER_OPEN, Rx.RX1): "hover_rx1",
    (Scenario.HOVER_OPEN, Rx.RX2): "hover_rx2",
    (Scenario.MOVING_OPEN, Rx.RX1): "moving_rx1",
    (Scenario.MOVING_OPEN, Rx.RX2): "moving_rx2",
}


def cmd_pathloss(args) -> int:
    scenario = Scenario(args.scenario)
    rx = Rx(args.rx)
    orientation = Orientation(args.orientation)
    if any(v <= 0 for v in args.x) or any(v <= 0 for v in args.h):
        raise ValueError("grid values must be positive")
    rf = pathloss.RfConfig(
        center_frequency=args.freq_ghz * 1e9,
        epsilon_r=args.epsilon_r,
        g_r_circular=args.g_r,
        harmonize_gains=args.harmonize_gains,
    )
    rows = []
    for x in args.x:
        for h in args.h:
            clamped = False
            gamma_v = None
            if scenario is Scenario.HOVER_FOLIAGE:
                # equipment-limited clamp; orientation has no visible effect
                result = pathloss.pl_foliage(rf)
                clamped = True
                model = "foliage_clamp"
            else:
                geom = LinkGeometry(x=x, h=h, h_rx=args.h_rx if rx is Rx.RX2 else 0.0)
                model = _MODEL_NAMES[(scenario, rx)]
                if scenario is Scenario.HOVER_OPEN and rx is Rx.RX1:
                    result = pathloss.pl_hover_rx1_vv(geom, cfg=rf)
                elif scenario is Scenario.HOVER_OPEN and rx is Rx.RX2:
                    result = pathloss.pl_hover_rx2_vv(geom, cfg=rf)
                elif scenario is Scenario.MOVING_OPEN and rx is Rx.RX1:
                    result = pathloss.pl_move_rx1_vv(geom, cfg=rf)
                else:
                    result = pathloss.pl_move_rx2_vv(geom, cfg=rf)
                if rx is Rx.RX2:
                    angles, _ = two_ray_geometry(geom)
                    gamma_v = pathloss.fresnel_gamma_v(angles.psi, rf.epsilon_r)
            vv_db = result.total_db
            if orientation is Orientation.VH and not clamped:
                c_pol = catalog.cpol_lookup(scenario, rx, x, h)
                result = pathloss.pl_vh(result, PolarizationState(Orientation.VH, c_pol))
            rows.append(
                {
                    "x_m": x,
                    "h_m": h,
                    "model": model,
                    "orientation": orientation.value,
                    "vv_db": vv_db,
                    "penalty_db": result.penalty_db,
                    "total_db": result.total_db,
                    "gamma_v": gamma_v,
                    "clamped": clamped,
                }
            )
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    out_path = out_dir / "sweep.csv"
    fileio.write_sweep_csv(out_path, rows)
    print(f"wrote {out_path}: {len(rows)} rows")
    return 0


def cmd_estimate(args) -> int:
    scans, header = fileio.read_cir_file(args.cir_file)
    rule = analysis.ClusterRule(
        min_duration_ns=args.min_duration, min_drop_db=args.min_drop
    )
    est = analysis.estimate_sv_params(scans, rule)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    out_path = out_dir / "estimate.json"
    out_path.write_text(fileio.estimate_to_json(est, header.get("scenario")))
    print(
        f"estimated from {est.n_scans} scans: n_c_mean={est.n_c_mean:.4g} "
        f"chi={est.chi:.4g} varsigma={est.varsigma:.4g} "
        f"eta={est.eta:.4g} gamma={est.gamma:.4g}"
    )
    for flag in est.flags:
        print(f"warning: {flag}")
    print(f"wrote {out_path}")
    return 0


def cmd_catalog(args) -> int:
    text = json.dumps(catalog.catalog_as_dict(), indent=2, sort_keys=True) + "\n"
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        out_path = out_dir / "catalog.json"
        out_path.write_text(text)
        print(f"wrote {out_path}")
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uwbag",
        description="UWB air-to-ground channel toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synthesize", help="generate a scan ensemble from catalog parameters")
    p.add_argument("--seed", type=_seed, default=None, help="64-bit unsigned stream seed")
    p.add_argument("--scans", type=int, default=None, help="number of scans (default 50)")
    p.add_argument("--scenario", choices=[s.value for s in Scenario], default=None)
    p.add_argument("--rx", choices=[r.value for r in Rx], default=None)
    p.add_argument("--orientation", choices=[o.value for o in Orientation], default=None)
    p.add_argument("--x", type=float, default=None, help="horizontal distance, 15 or 30 m")
    p.add_argument("--window-ns", type=float, default=None)
    p.add_argument("--spacing-ns", type=float, default=None)
    p.add_argument("--decay-as-time-constant", action="store_true",
                   help="interpret eta/gamma as time constants instead of rates")
    p.add_argument("--params-json", default=None,
                   help="JSON file with a custom SV row (catalog layout) overriding the built-in table")
    p.add_argument("--config", default=None, help="RunConfig JSON; explicit flags override it")
    p.add_argument("--out", default=".", help="output directory")
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("analyze", help="PDP, clusters, fits, and channel statistics of a scan file")
    p.add_argument("cir_file")
    p.add_argument("--min-duration", type=float, default=2.5, help="cluster rule: min duration, ns")
    p.add_argument("--min-drop", type=float, default=8.0, help="cluster rule: min drop from peak, dB")
    p.add_argument("--smooth-ns", type=float, default=2.5,
                   help="moving-average window for detection/fitting (0 disables)")
    p.add_argument("--dynamic-range", type=float, default=48.0)
    p.add_argument("--out", default=".", help="output directory")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("pathloss", help="analytical path-loss sweep over an (x, h) grid")
    p.add_argument("--scenario", choices=[s.value for s in Scenario], default=Scenario.HOVER_OPEN.value)
    p.add_argument("--rx", choices=[r.value for r in Rx], default=Rx.RX1.value)
    p.add_argument("--orientation", choices=[o.value for o in Orientation], default=Orientation.VV.value)
    p.add_argument("--x", type=_float_list, default=[15.0, 30.0], help="comma-separated x grid, m")
    p.add_argument("--h", type=_float_list, default=[10.0, 20.0, 30.0], help="comma-separated h grid, m")
    p.add_argument("--h-rx", type=float, default=1.5, help="elevated RX height (RX2), m")
    p.add_argument("--freq-ghz", type=float, default=3.95)
    p.add_argument("--epsilon-r", type=float, default=35.0)
    p.add_argument("--g-r", type=float, default=0.5, help="mean circular RX gain (moving)")
    p.add_argument("--harmonize-gains", action="store_true",
                   help="square amplitude gains uniformly in all formulas")
    p.add_argument("--out", default=".", help="output directory")
    p.set_defaults(func=cmd_pathloss)

    p = sub.add_parser("estimate", help="recover SV parameters from a scan file")
    p.add_argument("cir_file")
    p.add_argument("--min-duration", type=float, default=2.5)
    p.add_argument("--min-drop", type=float, default=8.0)
    p.add_argument("--out", default=".", help="output directory")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("catalog", help="dump the built-in parameter tables")
    p.add_argument("--out", default=None, help="write catalog.json here instead of stdout")
    p.set_defaults(func=cmd_catalog)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
