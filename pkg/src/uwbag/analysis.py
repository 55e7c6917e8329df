"""CIR and power-delay-profile analysis.

Pipeline pieces: PDP formation and smoothing, cluster detection on the
delay grid, per-cluster versus single-line least-squares fitting, RMS
delay spread, Ricean K-factor, significant-MPC counting, CLEAN template
deconvolution, and recovery of the synthesis parameters from a scan
ensemble.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .svmodel import Cir, grid_capacity

LN10 = math.log(10.0)
DEFAULT_DYNAMIC_RANGE_DB = 48.0


# ---------------------------------------------------------------------------
# power delay profile


@dataclass
class Pdp:
    """Delay-indexed mean power on the uniform sample grid."""

    delays: np.ndarray
    powers: np.ndarray
    sample_spacing: float
    n_scans: int = 1
    normalization: str = "absolute"  # or "peak"

    def __post_init__(self):
        self.delays = np.asarray(self.delays, dtype=np.float64)
        self.powers = np.asarray(self.powers, dtype=np.float64)
        if self.delays.shape != self.powers.shape:
            raise ValueError("delays and powers must have equal length")
        if np.any(self.powers < 0.0):
            raise ValueError("PDP powers must be >= 0")


def compute_pdp(scans: list[Cir], normalization: str = "absolute") -> Pdp:
    """Average |H|^2 of the scans onto the shared sample grid (taps are
    binned to the nearest grid point, powers add incoherently)."""
    if not scans:
        raise ValueError("need at least one scan")
    dt = scans[0].sample_spacing
    window = scans[0].window
    for c in scans[1:]:
        if c.sample_spacing != dt or c.window != window:
            raise ValueError("scans have mismatched sample grids")
    n_bins = grid_capacity(window, dt)
    acc = np.zeros(n_bins, dtype=np.float64)
    for c in scans:
        if c.n_taps == 0:
            continue
        idx = np.clip(np.rint(c.delays / dt).astype(np.int64), 0, n_bins - 1)
        np.add.at(acc, idx, c.powers())
    acc /= len(scans)
    if normalization == "peak":
        peak = acc.max()
        if peak > 0.0:
            acc = acc / peak
    elif normalization != "absolute":
        raise ValueError(f"unknown normalization {normalization!r}")
    delays = np.arange(n_bins, dtype=np.float64) * dt
    return Pdp(delays, acc, dt, n_scans=len(scans), normalization=normalization)


def smooth_pdp(pdp: Pdp, window_ns: float) -> Pdp:
    """Moving-average smoothing in linear power (edge bins average over
    the part of the window that overlaps the grid)."""
    k = max(1, int(round(window_ns / pdp.sample_spacing)))
    if k % 2 == 0:
        k += 1
    kern = np.ones(k)
    num = np.convolve(pdp.powers, kern, mode="same")
    den = np.convolve(np.ones_like(pdp.powers), kern, mode="same")
    return Pdp(
        pdp.delays.copy(),
        num / den,
        pdp.sample_spacing,
        n_scans=pdp.n_scans,
        normalization=pdp.normalization,
    )


def pdp_db(pdp: Pdp, dynamic_range_db: float = DEFAULT_DYNAMIC_RANGE_DB):
    """Peak-normalized dB view of the PDP.

    Bins below the dynamic-range floor (including empty ones) are pinned
    at -dynamic_range_db and masked out; fits ignore them.  Returns
    (db array, above-floor mask).
    """
    peak = pdp.powers.max()
    if peak <= 0.0:
        raise ValueError("PDP has no power")
    floor = peak * 10.0 ** (-dynamic_range_db / 10.0)
    above = pdp.powers > floor
    db = 10.0 * np.log10(np.maximum(pdp.powers, floor) / peak)
    return db, above


# ---------------------------------------------------------------------------
# cluster detection


@dataclass(frozen=True)
class ClusterRule:
    """Cluster identification constants: a cluster spans at least
    min_duration_ns, and the profile must fall min_drop_db below the
    cluster peak before the next cluster may begin."""

    min_duration_ns: float = 2.5
    min_drop_db: float = 8.0

    def __post_init__(self):
        if not self.min_duration_ns > 0.0:
            raise ValueError("min_duration_ns must be > 0")
        if not self.min_drop_db > 0.0:
            raise ValueError("min_drop_db must be > 0")


@dataclass(frozen=True)
class Cluster:
    start_ns: float
    end_ns: float
    peak_power_db: float
    lead_delay_ns: float

    @property
    def duration_ns(self) -> float:
        return self.end_ns - self.start_ns


@dataclass
class ClusterSet:
    clusters: list[Cluster]
    rule: ClusterRule

    def __len__(self) -> int:
        return len(self.clusters)

    def __iter__(self):
        return iter(self.clusters)


def detect_clusters(
    pdp: Pdp,
    rule: ClusterRule = ClusterRule(),
    dynamic_range_db: float = DEFAULT_DYNAMIC_RANGE_DB,
) -> ClusterSet:
    """Greedy left-to-right cluster segmentation of the PDP.

    A cluster opens at the first above-floor bin; once the profile has
    fallen min_drop_db below the running cluster peak, the next rise into
    an above-floor bin closes it and opens the next one.  Segments
    shorter than min_duration_ns are merged into their predecessor (the
    first segment merges forward).  Works on the peak-normalized dB view,
    so the result is invariant to the PDP's normalization.
    """
    db, above = pdp_db(pdp, dynamic_range_db)
    if not above.any():
        raise ValueError("PDP has no above-floor bins")
    n = db.size
    segments = []  # (start_i, last_above_i)
    in_cluster = False
    start = 0
    last_above = 0
    peak = -math.inf
    dropped = False
    for i in range(n):
        if not in_cluster:
            if above[i]:
                in_cluster = True
                start = i
                last_above = i
                peak = db[i]
                dropped = False
            continue
        if dropped and above[i] and db[i] > db[i - 1]:
            segments.append((start, last_above))
            start = i
            last_above = i
            peak = db[i]
            dropped = False
            continue
        if above[i]:
            last_above = i
        if db[i] > peak:
            peak = db[i]
        if peak - db[i] >= rule.min_drop_db:
            dropped = True
    if in_cluster:
        segments.append((start, last_above))

    # merge too-short segments into their predecessor
    dt = pdp.sample_spacing
    merged = True
    while merged and len(segments) > 1:
        merged = False
        for k, (s, e) in enumerate(segments):
            if (e - s) * dt < rule.min_duration_ns:
                if k > 0:
                    ps, _ = segments[k - 1]
                    segments[k - 1] = (ps, e)
                else:
                    _, ne = segments[1]
                    segments[1] = (s, ne)
                del segments[k]
                merged = True
                break

    clusters = [
        Cluster(
            start_ns=float(pdp.delays[s]),
            end_ns=float(pdp.delays[e]),
            peak_power_db=float(db[s : e + 1].max()),
            lead_delay_ns=float(pdp.delays[s]),
        )
        for s, e in segments
    ]
    return ClusterSet(clusters=clusters, rule=rule)


# ---------------------------------------------------------------------------
# least-squares fitting


def fit_linear_ls(delays_ns, powers_db) -> tuple[float, float]:
    """Ordinary least squares of dB power against delay; returns
    (intercept dB, slope dB/ns)."""
    x = np.asarray(delays_ns, dtype=np.float64)
    y = np.asarray(powers_db, dtype=np.float64)
    if x.size < 2:
        raise ValueError("need at least two points")
    n = x.size
    sx = x.sum()
    sy = y.sum()
    denom = n * (x * x).sum() - sx * sx
    if denom <= 0.0:
        raise ValueError("all delays identical; slope undefined")
    slope = (n * (x * y).sum() - sx * sy) / denom
    intercept = (sy - slope * sx) / n
    return float(intercept), float(slope)


@dataclass
class FitReport:
    """Per-cluster linear fits versus one global fit over the same points."""

    per_cluster_fits: list[tuple[float, float]]
    single_fit: tuple[float, float]
    mean_abs_residual_sv: float
    mean_abs_residual_single: float
    n_points: int
    flags: list[str] = field(default_factory=list)


def fit_sv_piecewise(
    pdp: Pdp,
    clusters: ClusterSet,
    dynamic_range_db: float = DEFAULT_DYNAMIC_RANGE_DB,
) -> FitReport:
    """Fit each detected cluster with its own line and the union of the
    same above-floor points with a single line; report both mean absolute
    residuals over the identical point set."""
    if not clusters.clusters:
        raise ValueError("no clusters to fit")
    db, above = pdp_db(pdp, dynamic_range_db)
    flags = []
    fits = []
    all_x = []
    all_y = []
    all_pred_sv = []
    for ci, cl in enumerate(clusters):
        sel = above & (pdp.delays >= cl.start_ns) & (pdp.delays <= cl.end_ns)
        x = pdp.delays[sel]
        y = db[sel]
        if x.size < 2 or np.unique(x).size < 2:
            b0 = float(y.mean()) if x.size else 0.0
            b1 = 0.0
            flags.append(f"cluster {ci}: <2 points, flat fit")
        else:
            b0, b1 = fit_linear_ls(x, y)
        fits.append((b0, b1))
        all_x.append(x)
        all_y.append(y)
        all_pred_sv.append(b0 + b1 * x)
    x = np.concatenate(all_x)
    y = np.concatenate(all_y)
    pred_sv = np.concatenate(all_pred_sv)
    if x.size < 2 or np.unique(x).size < 2:
        single = (float(y.mean()) if y.size else 0.0, 0.0)
        flags.append("single fit: <2 points, flat fit")
    else:
        single = fit_linear_ls(x, y)
    pred_single = single[0] + single[1] * x
    return FitReport(
        per_cluster_fits=fits,
        single_fit=single,
        mean_abs_residual_sv=float(np.abs(y - pred_sv).mean()),
        mean_abs_residual_single=float(np.abs(y - pred_single).mean()),
        n_points=int(x.size),
        flags=flags,
    )


# ---------------------------------------------------------------------------
# scalar channel statistics


def _delay_power(x) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(x, Cir):
        return x.delays, x.powers()
    if isinstance(x, Pdp):
        return x.delays, x.powers
    raise TypeError(f"expected Cir or Pdp, got {type(x).__name__}")


def rms_delay_spread(x) -> float:
    """Power-weighted standard deviation of the tap delays, ns."""
    delays, powers = _delay_power(x)
    total = powers.sum()
    if not total > 0.0:
        raise ValueError("zero total power")
    mean = float((powers * delays).sum() / total)
    second = float((powers * delays * delays).sum() / total)
    return math.sqrt(max(second - mean * mean, 0.0))


def ricean_k_factor(cir: Cir, lead_window_db: float = 3.0) -> float:
    """K = 10*log10(LOS power / total power of the remaining taps), dB.

    The LOS tap is the earliest tap whose amplitude is within
    lead_window_db of the strongest tap (the strongest itself if none).
    Cross-polarized scans are refused: their LOS component is too weak
    for the ratio to be meaningful.
    """
    if cir.meta.get("orientation") == "vh":
        raise ValueError("K-factor is not evaluated for VH scans")
    if cir.n_taps == 0:
        raise ValueError("empty CIR")
    amps = np.abs(cir.amplitudes)
    thr = amps.max() * 10.0 ** (-lead_window_db / 20.0)
    lead = int(np.argmax(amps >= thr))
    p = amps**2
    rest = float(p.sum() - p[lead])
    if rest <= 0.0:
        return math.inf
    return 10.0 * math.log10(float(p[lead]) / rest)


def count_significant_mpcs(cir: Cir, threshold_fraction: float = 0.2) -> int:
    """Taps with amplitude at least threshold_fraction of the strongest."""
    if cir.n_taps == 0:
        raise ValueError("empty CIR")
    amps = np.abs(cir.amplitudes)
    return int((amps >= threshold_fraction * amps.max()).sum())


@dataclass
class ChannelStats:
    """Ensemble summary: RMS delay spread of the mean PDP, mean per-scan
    K-factor (None for VH ensembles), and mean significant-MPC count."""

    rms_ds_ns: float
    k_factor_db: float | None
    n_significant_mpcs: float
    threshold_fraction: float = 0.2


def channel_stats(scans: list[Cir], threshold_fraction: float = 0.2) -> ChannelStats:
    pdp = compute_pdp(scans)
    vh = any(c.meta.get("orientation") == "vh" for c in scans)
    ks = []
    counts = []
    for c in scans:
        counts.append(count_significant_mpcs(c, threshold_fraction))
        if vh:
            continue
        k = ricean_k_factor(c)
        if math.isfinite(k):
            ks.append(k)
    k_mean = None if (vh or not ks) else float(np.mean(ks))
    return ChannelStats(
        rms_ds_ns=rms_delay_spread(pdp),
        k_factor_db=k_mean,
        n_significant_mpcs=float(np.mean(counts)),
        threshold_fraction=threshold_fraction,
    )


# ---------------------------------------------------------------------------
# CLEAN deconvolution


def clean_deconvolve(
    raw: np.ndarray,
    template: np.ndarray,
    sample_spacing: float,
    stop_fraction: float = 0.2,
    max_iters: int = 256,
) -> Cir:
    """Extract taps from a sampled waveform by iteratively subtracting the
    best-matching scaled, shifted template.

    Stops once the matched-filter amplitude falls below stop_fraction of
    the first (strongest) pick; if max_iters is exhausted first, the
    partial result is returned with meta["converged"] = False.
    """
    raw = np.ascontiguousarray(raw, dtype=np.float64)
    template = np.ascontiguousarray(template, dtype=np.float64)
    if template.size == 0 or not np.any(template != 0.0):
        raise ValueError("template must be nonzero")
    if raw.size == 0:
        raise ValueError("raw waveform is empty")
    idx, amp, converged = kernels.clean_deconv(raw, template, stop_fraction, max_iters)
    # combine repeat picks of one lag, keep delays strictly increasing
    taps: dict[int, float] = {}
    for k, a in zip(idx.tolist(), amp.tolist()):
        taps[k] = taps.get(k, 0.0) + a
    lags = sorted(taps)
    delays = np.array([k * sample_spacing for k in lags], dtype=np.float64)
    amps = np.array([taps[k] for k in lags], dtype=np.complex128)
    return Cir(
        delays=delays,
        amplitudes=amps,
        sample_spacing=sample_spacing,
        window=(raw.size - 1) * sample_spacing,
        meta={"converged": bool(converged), "n_iterations": int(idx.size)},
    )


# ---------------------------------------------------------------------------
# parameter estimation


@dataclass
class SVEstimate:
    """Synthesis parameters recovered from a scan ensemble.

    Rates are censored Poisson-process maximum-likelihood estimates
    (events per unit observed window/span), which stay unbiased under the
    scan-window truncation; decay constants come from dB-domain linear
    fits converted by -slope * ln(10) / 10.
    """

    n_c_mean: float
    chi: float
    varsigma: float
    eta: float
    gamma: float
    omega00: float
    n_scans: int
    flags: list[str] = field(default_factory=list)

    def to_params(self):
        from .catalog import SVParams

        if not all(
            math.isfinite(v) for v in (self.chi, self.varsigma, self.eta, self.gamma)
        ):
            raise ValueError(f"estimate is incomplete: flags={self.flags}")
        return SVParams(
            n_c_mean=self.n_c_mean,
            chi=self.chi,
            varsigma=self.varsigma,
            eta=self.eta,
            gamma=self.gamma,
            omega00=self.omega00,
        )


def estimate_sv_params(scans: list[Cir], rule: ClusterRule = ClusterRule()) -> SVEstimate:
    """Recover the synthesis parameters from scans.

    Each scan's taps are partitioned into clusters: a dropping tap starts
    a new cluster when its drop from the running cluster peak is
    shallower than min_drop_db / min_duration_ns (dB per ns) over the
    elapsed delay -- far too slow to be within-cluster decay -- and a tap
    rising above the cluster peak starts one after min_duration_ns.  When
    the first pass finds a within-cluster decay much steeper than that
    threshold slope, a second pass re-partitions with the threshold
    raised to half the measured decay slope (and sub-resolution drops
    guarded), which recovers cluster boundaries at small lead-to-lead
    gaps that the fixed cone cannot separate from tap fading.

    chi is the mean detected cluster count per window length (the same
    identity the catalog rows satisfy), varsigma the mean intra-cluster
    tap count per unit span, eta a pooled dB fit over (lead delay, lead
    power), and gamma the mean per-cluster dB slope over clusters with at
    least three taps.
    """
    if not scans:
        raise ValueError("need at least one scan")
    window = scans[0].window
    for c in scans[1:]:
        if c.window != window:
            raise ValueError("scans have mismatched windows")
    flags = []
    if len(scans) < 10:
        flags.append("fewer than 10 scans; estimates may be unstable")

    delays_parts = []
    db_parts = []
    offsets = [0]
    n_total = 0
    dropped_zero = 0
    for c in scans:
        p = c.powers()
        keep = p > 0.0
        dropped_zero += int((~keep).sum())
        d = c.delays[keep]
        delays_parts.append(d)
        db_parts.append(10.0 * np.log10(p[keep]))
        n_total += d.size
        offsets.append(n_total)
    if dropped_zero:
        flags.append(f"ignored {dropped_zero} zero-power taps")
    delays = np.concatenate(delays_parts) if n_total else np.empty(0)
    powers_db = np.concatenate(db_parts) if n_total else np.empty(0)
    if n_total == 0:
        raise ValueError("no taps with positive power")
    offsets = np.asarray(offsets, dtype=np.int64)

    slope_thr = rule.min_drop_db / rule.min_duration_ns
    acc = kernels.sv_accumulate(
        delays, powers_db, offsets, window, rule.min_duration_ns, slope_thr, 0.0
    )
    gamma_db_slope = (acc[8] / acc[9]) if acc[9] > 0 else math.nan  # dB/ns, negative
    if math.isfinite(gamma_db_slope) and -gamma_db_slope / 2.0 > slope_thr:
        thr2 = -gamma_db_slope / 2.0
        guard2 = min(rule.min_drop_db / -gamma_db_slope, rule.min_duration_ns)
        acc = kernels.sv_accumulate(
            delays, powers_db, offsets, window, rule.min_duration_ns, thr2, guard2
        )
    (
        total_clusters,
        total_intra,
        max_per_scan,
        en,
        esx,
        esy,
        esxy,
        esxx,
        gsum,
        gcnt,
        lead0_sum,
        n_scans,
    ) = acc.tolist()

    n_c_mean = total_clusters / n_scans
    if max_per_scan < 2:
        chi = math.nan
        flags.append("no scan shows more than one cluster; chi undefined")
    else:
        chi = n_c_mean / window
    varsigma = total_intra / (n_scans * window)
    if varsigma <= 0.0:
        varsigma = math.nan
        flags.append("no intra-cluster taps; varsigma undefined")

    denom = en * esxx - esx * esx
    if en >= 2 and denom > 0.0:
        eta = -((en * esxy - esx * esy) / denom) * LN10 / 10.0
    else:
        eta = math.nan
        flags.append("not enough distinct lead delays; eta undefined")

    if gcnt > 0:
        gamma = -(gsum / gcnt) * LN10 / 10.0
    else:
        gamma = math.nan
        flags.append("no cluster has >= 3 taps; gamma undefined")

    return SVEstimate(
        n_c_mean=n_c_mean,
        chi=chi,
        varsigma=varsigma,
        eta=eta,
        gamma=gamma,
        omega00=lead0_sum / n_scans,
        n_scans=int(n_scans),
        flags=flags,
    )
