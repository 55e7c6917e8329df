"""Stochastic synthesis of channel impulse responses (Saleh-Valenzuela).

Multipath arrives in clusters: cluster leads form a Poisson process over
the scan window (the first lead is pinned at zero excess delay for the
LOS arrival, and consumes one mean inter-arrival of the Poisson budget so
the expected cluster count equals chi * window, matching the catalog
identity N_C = chi * 100 ns).  Within a cluster, MPCs arrive with
Exponential(varsigma) gaps until the next lead.  Mean tap power decays as
exp(-T*eta) across clusters and exp(-tau*gamma) within one; amplitudes
are Rayleigh with that mean square (or deterministically its square
root), phases uniform on [0, 2*pi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .catalog import SVParams, ScenarioKey
from .rng import Stream, scan_stream

DEFAULT_SAMPLE_SPACING_NS = 0.06
DEFAULT_WINDOW_NS = 100.0


def grid_capacity(window: float, sample_spacing: float) -> int:
    """Number of sample-grid points in the scan window; arrival processes
    saturate at this count under extreme rates."""
    return int(math.floor(window / sample_spacing)) + 1


@dataclass
class Cir:
    """One channel scan: tap delays (ns, strictly increasing, within
    [0, window]) and complex linear amplitudes on a common grid spec."""

    delays: np.ndarray
    amplitudes: np.ndarray
    sample_spacing: float = DEFAULT_SAMPLE_SPACING_NS
    window: float = DEFAULT_WINDOW_NS
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.delays = np.asarray(self.delays, dtype=np.float64)
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        if self.delays.shape != self.amplitudes.shape:
            raise ValueError("delays and amplitudes must have equal length")
        if not self.sample_spacing > 0.0:
            raise ValueError("sample_spacing must be > 0")
        if self.delays.size:
            if np.any(np.diff(self.delays) <= 0.0):
                raise ValueError("tap delays must be strictly increasing")
            if self.delays[0] < 0.0 or self.delays[-1] > self.window:
                raise ValueError("tap delays must lie within [0, window]")

    @property
    def n_taps(self) -> int:
        return int(self.delays.size)

    def powers(self) -> np.ndarray:
        """Linear tap powers |amplitude|^2."""
        return np.abs(self.amplitudes) ** 2


def _effective_rates(params: SVParams, decay_as_time_constant: bool) -> tuple[float, float]:
    if not decay_as_time_constant:
        return params.eta, params.gamma
    if params.eta <= 0.0 or params.gamma <= 0.0:
        raise ValueError("time-constant interpretation requires eta > 0 and gamma > 0")
    return 1.0 / params.eta, 1.0 / params.gamma


def sample_cluster_arrivals(
    params: SVParams,
    stream: Stream,
    window: float = DEFAULT_WINDOW_NS,
    sample_spacing: float = DEFAULT_SAMPLE_SPACING_NS,
) -> np.ndarray:
    """Cluster lead delays for one scan: pinned lead at 0 plus
    Exponential(chi)-gap arrivals, at most one per grid point."""
    cap = grid_capacity(window, sample_spacing)
    return kernels.cluster_arrivals(np.uint64(stream.key), params.chi, window, cap)


def sample_mpc_arrivals(
    params: SVParams,
    stream: Stream,
    span: float,
    sample_spacing: float = DEFAULT_SAMPLE_SPACING_NS,
    include_end: bool = True,
) -> np.ndarray:
    """Relative MPC delays within one cluster: pinned lead at 0 plus
    Exponential(varsigma)-gap arrivals truncated at `span` (strictly
    before it when include_end is False, as used against the next lead)."""
    if span < 0.0:
        raise ValueError("span must be >= 0")
    cap = grid_capacity(max(span, sample_spacing), sample_spacing)
    return kernels.mpc_arrivals(np.uint64(stream.key), params.varsigma, span, cap, include_end)


def mpc_mean_power(params: SVParams, t_cluster: float, tau: float) -> float:
    """Mean square tap amplitude omega00 * exp(-T*eta) * exp(-tau*gamma)."""
    if t_cluster < 0.0 or tau < 0.0:
        raise ValueError("delays must be >= 0")
    return params.omega00 * math.exp(-t_cluster * params.eta) * math.exp(-tau * params.gamma)


def synthesize_cir(
    params: SVParams,
    stream: Stream,
    *,
    sample_spacing: float = DEFAULT_SAMPLE_SPACING_NS,
    window: float = DEFAULT_WINDOW_NS,
    rayleigh: bool = True,
    decay_as_time_constant: bool = False,
    scenario: ScenarioKey | None = None,
) -> Cir:
    """Draw one scan from the model."""
    cir, _, _ = synthesize_cir_detail(
        params,
        stream,
        sample_spacing=sample_spacing,
        window=window,
        rayleigh=rayleigh,
        decay_as_time_constant=decay_as_time_constant,
        scenario=scenario,
    )
    return cir


def synthesize_cir_detail(
    params: SVParams,
    stream: Stream,
    *,
    sample_spacing: float = DEFAULT_SAMPLE_SPACING_NS,
    window: float = DEFAULT_WINDOW_NS,
    rayleigh: bool = True,
    decay_as_time_constant: bool = False,
    scenario: ScenarioKey | None = None,
) -> tuple[Cir, np.ndarray, np.ndarray]:
    """Like synthesize_cir, also returning the generating cluster lead
    delays and the per-tap cluster index (ground truth for estimator and
    decay-slope validation)."""
    eta, gamma = _effective_rates(params, decay_as_time_constant)
    cap = grid_capacity(window, sample_spacing)
    delays, re, im, cluster_id, starts = kernels.synth_scan(
        np.uint64(stream.key),
        params.chi,
        params.varsigma,
        eta,
        gamma,
        params.omega00,
        window,
        cap,
        rayleigh,
    )
    meta = {"stream_key": stream.key}
    if scenario is not None:
        meta["scenario"] = scenario.describe()
        meta["orientation"] = scenario.orientation.value
    cir = Cir(
        delays=delays,
        amplitudes=re + 1j * im,
        sample_spacing=sample_spacing,
        window=window,
        meta=meta,
    )
    return cir, starts, cluster_id


def synthesize_ensemble(
    params: SVParams,
    n_scans: int,
    seed: int,
    *,
    sample_spacing: float = DEFAULT_SAMPLE_SPACING_NS,
    window: float = DEFAULT_WINDOW_NS,
    rayleigh: bool = True,
    decay_as_time_constant: bool = False,
    scenario: ScenarioKey | None = None,
) -> list[Cir]:
    """n_scans independent scans; scan i comes from substream i of the
    seed, so the ensemble is identical regardless of generation order."""
    if n_scans < 1:
        raise ValueError("n_scans must be >= 1")
    out = []
    for i in range(n_scans):
        cir = synthesize_cir(
            params,
            scan_stream(seed, i),
            sample_spacing=sample_spacing,
            window=window,
            rayleigh=rayleigh,
            decay_as_time_constant=decay_as_time_constant,
            scenario=scenario,
        )
        cir.meta["seed"] = seed
        cir.meta["scan_index"] = i
        out.append(cir)
    return out
