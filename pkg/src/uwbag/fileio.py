"""Bit-stable text formats for scans, profiles, sweeps, and run configs.

Everything is plain UTF-8 CSV with a commented header block, written with
locale-independent formatting: dB columns carry two decimals, delays and
linear amplitudes nine significant digits.  Writing is deterministic, so
re-running a command with the same config reproduces files byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .analysis import ChannelStats, ClusterSet, FitReport, Pdp, SVEstimate, pdp_db
from .catalog import ScenarioKey
from .svmodel import Cir

CIR_FORMAT_VERSION = 1


class CirFileError(ValueError):
    """Malformed scan file; carries the offending line number."""

    def __init__(self, path, line_no: int, message: str):
        super().__init__(f"{path}:{line_no}: {message}")
        self.line_no = line_no


def _g9(x: float) -> str:
    return format(float(x), ".9g")


def _db(x: float) -> str:
    return format(float(x), ".2f")


def write_cir_file(
    path,
    scans: list[Cir],
    seed: int | None = None,
    scenario: str | None = None,
) -> None:
    if not scans:
        raise ValueError("nothing to write: empty scan list")
    dt = scans[0].sample_spacing
    window = scans[0].window
    for c in scans[1:]:
        if c.sample_spacing != dt or c.window != window:
            raise ValueError("scans have mismatched sample grids")
    lines = [
        f"# uwbag-cir format_version={CIR_FORMAT_VERSION}",
        f"# sample_spacing_ns={_g9(dt)}",
        f"# window_ns={_g9(window)}",
        f"# n_scans={len(scans)}",
        f"# seed={'none' if seed is None else int(seed)}",
        f"# scenario={scenario if scenario else 'none'}",
        "scan_id,delay_ns,real,imag",
    ]
    for i, c in enumerate(scans):
        for d, a in zip(c.delays, c.amplitudes):
            lines.append(f"{i},{_g9(d)},{_g9(a.real)},{_g9(a.imag)}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_cir_file(path) -> tuple[list[Cir], dict]:
    """Parse a scan file back into Cir objects plus its header fields."""
    header: dict = {}
    rows_by_scan: dict[int, list[tuple[float, complex]]] = {}
    saw_columns = False
    with open(path) as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    k, v = body.split("=", 1)
                    header[k.strip().split()[-1]] = v.strip()
                continue
            if not saw_columns:
                if line != "scan_id,delay_ns,real,imag":
                    raise CirFileError(path, line_no, f"unexpected column header {line!r}")
                saw_columns = True
                continue
            parts = line.split(",")
            if len(parts) != 4:
                raise CirFileError(path, line_no, f"expected 4 columns, got {len(parts)}")
            try:
                sid = int(parts[0])
                delay = float(parts[1])
                re = float(parts[2])
                im = float(parts[3])
            except ValueError as exc:
                raise CirFileError(path, line_no, str(exc)) from None
            rows_by_scan.setdefault(sid, []).append((delay, complex(re, im)))
    if not saw_columns:
        raise CirFileError(path, 1, "missing column header")
    try:
        dt = float(header["sample_spacing_ns"])
        window = float(header["window_ns"])
        n_scans = int(header["n_scans"])
    except (KeyError, ValueError) as exc:
        raise CirFileError(path, 1, f"bad or missing header field: {exc}") from None
    scenario = header.get("scenario", "none")
    meta_common: dict = {}
    if scenario != "none":
        meta_common["scenario"] = scenario
        try:
            meta_common["orientation"] = ScenarioKey.parse(scenario).orientation.value
        except ValueError:
            pass
    seed_text = header.get("seed", "none")
    if seed_text != "none":
        meta_common["seed"] = int(seed_text)

    scans = []
    for sid in range(n_scans):
        rows = rows_by_scan.pop(sid, [])
        delays = np.array([r[0] for r in rows], dtype=np.float64)
        amps = np.array([r[1] for r in rows], dtype=np.complex128)
        try:
            cir = Cir(
                delays=delays,
                amplitudes=amps,
                sample_spacing=dt,
                window=window,
                meta=dict(meta_common, scan_index=sid),
            )
        except ValueError as exc:
            raise CirFileError(path, 1, f"scan {sid}: {exc}") from None
        scans.append(cir)
    if rows_by_scan:
        raise CirFileError(
            path, 1, f"scan ids outside 0..{n_scans - 1}: {sorted(rows_by_scan)}"
        )
    return scans, header


def write_pdp_csv(path, pdp: Pdp, dynamic_range_db: float = 48.0) -> None:
    db, _ = pdp_db(pdp, dynamic_range_db)
    lines = ["delay_ns,power_db"]
    for d, p in zip(pdp.delays, db):
        lines.append(f"{_g9(d)},{_db(p)}")
    Path(path).write_text("\n".join(lines) + "\n")


def write_clusters_csv(path, clusters: ClusterSet) -> None:
    lines = ["start_ns,end_ns,duration_ns,peak_power_db,lead_delay_ns"]
    for c in clusters:
        lines.append(
            f"{_g9(c.start_ns)},{_g9(c.end_ns)},{_g9(c.duration_ns)},"
            f"{_db(c.peak_power_db)},{_g9(c.lead_delay_ns)}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


def write_stats_csv(path, stats: ChannelStats, clusters: ClusterSet, fit: FitReport) -> None:
    k = "" if stats.k_factor_db is None else _db(stats.k_factor_db)
    lines = [
        "rms_ds_ns,k_factor_db,n_significant_mpcs,n_clusters,"
        "sv_fit_residual_db,single_fit_residual_db",
        f"{_g9(stats.rms_ds_ns)},{k},{_g9(stats.n_significant_mpcs)},"
        f"{len(clusters)},{_db(fit.mean_abs_residual_sv)},{_db(fit.mean_abs_residual_single)}",
    ]
    Path(path).write_text("\n".join(lines) + "\n")


def write_sweep_csv(path, rows: list[dict]) -> None:
    lines = ["x_m,h_m,model,orientation,vv_db,penalty_db,total_db,gamma_v,clamped"]
    for r in rows:
        gamma = "" if r.get("gamma_v") is None else _g9(r["gamma_v"])
        lines.append(
            f"{_g9(r['x_m'])},{_g9(r['h_m'])},{r['model']},{r['orientation']},"
            f"{_db(r['vv_db'])},{_db(r['penalty_db'])},{_db(r['total_db'])},"
            f"{gamma},{int(r['clamped'])}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


def estimate_to_json(estimate: SVEstimate, scenario: str | None) -> str:
    """cmd_estimate output: one SV row in the catalog data-file layout
    (re-ingestable via synthesize --params-json) plus estimator metadata.
    Undefined (flagged) parameters serialize as null."""

    def _num(v):
        import math

        return v if math.isfinite(v) else None

    row = {
        "scenario": None,
        "rx": None,
        "orientation": None,
        "x_m": None,
        "n_c_mean": _num(estimate.n_c_mean),
        "chi_per_ns": _num(estimate.chi),
        "varsigma_per_ns": _num(estimate.varsigma),
        "eta_per_ns": _num(estimate.eta),
        "gamma_per_ns": _num(estimate.gamma),
        "omega00": _num(estimate.omega00),
        "n_scans": estimate.n_scans,
        "flags": estimate.flags,
    }
    if scenario and scenario != "none":
        key = ScenarioKey.parse(scenario)
        row.update(
            scenario=key.scenario.value,
            rx=key.rx.value,
            orientation=key.orientation.value,
            x_m=key.x_m,
        )
    return json.dumps(row, indent=2, sort_keys=True) + "\n"


@dataclass
class RunConfig:
    """Serializable description of one synthesize run; reading a written
    config back reproduces the run exactly."""

    seed: int = 0
    n_scans: int = 50
    scenario: str = "hover_open"
    rx: str = "rx1"
    orientation: str = "vv"
    x_m: float = 15.0
    sample_spacing_ns: float = 0.06
    window_ns: float = 100.0
    decay_as_time_constant: bool = False
    rule_min_duration_ns: float = 2.5
    rule_min_drop_db: float = 8.0
    rf: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        data = json.loads(text)
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        return cls(**data)
