"""Analytical received-power and path-loss models for the UAV link.

Close-in reference form: L(d) = L(d_ref) + 10*log10(geometry term), with
the free-space reference evaluated at the band center.  The hovering
models use the LOS elevation gain squared (power), the moving-UAV models
use its first power against a mean circular receiver gain; each formula is
composed exactly in its published shape.  Set ``RfConfig.harmonize_gains``
to square every amplitude gain uniformly instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from types import MappingProxyType
from typing import Mapping

from .antenna import AntennaModel, PolarizationState, grc_gain, los_gain, mismatch_penalty_db
from .geometry import LinkGeometry, elevation_angle, two_ray_geometry

C_LIGHT = 299_792_458.0  # m/s


@dataclass(frozen=True)
class RfConfig:
    """RF constants of the link model.

    center_frequency    Hz; the UWB band center used for the wavelength
    reference_distance  m; close-in free-space reference
    epsilon_r           relative permittivity of the (grassy) ground
    g_r_circular        mean RX gain during circular UAV motion, linear
    dynamic_range_db    sounder dynamic range, bounds measurable loss
    harmonize_gains     square amplitude gains uniformly in all formulas
    """

    center_frequency: float = 3.95e9
    reference_distance: float = 1.0
    epsilon_r: float = 35.0
    g_r_circular: float = 0.5
    dynamic_range_db: float = 48.0
    harmonize_gains: bool = False

    def __post_init__(self):
        if not self.center_frequency > 0.0:
            raise ValueError("center_frequency must be > 0")
        if not self.reference_distance > 0.0:
            raise ValueError("reference_distance must be > 0")
        if not self.epsilon_r > 1.0:
            raise ValueError("epsilon_r must be > 1")
        if not 0.0 < self.g_r_circular <= 1.0:
            raise ValueError("g_r_circular must be in (0, 1]")

    @property
    def wavelength(self) -> float:
        return C_LIGHT / self.center_frequency


DEFAULT_RF = RfConfig()
DEFAULT_ANTENNA = AntennaModel()

_EMPTY: Mapping[str, float] = MappingProxyType({})


@dataclass(frozen=True)
class PathLossResult:
    """Path loss in dB with its breakdown.

    total_db = fspl_ref_db + geometry_term_db + penalty_db always holds;
    components carries the linear power terms of the geometry denominator
    (LOS and ground-reflected), and clamped marks dynamic-range-limited
    estimates rather than propagation predictions.
    """

    total_db: float
    fspl_ref_db: float
    geometry_term_db: float
    penalty_db: float = 0.0
    components: Mapping[str, float] = _EMPTY
    clamped: bool = False

    def linear_gain(self) -> float:
        """Received-over-transmitted power ratio, 10**(-total_db/10)."""
        return 10.0 ** (-self.total_db / 10.0)


def fspl_ref(cfg: RfConfig = DEFAULT_RF) -> float:
    """Free-space path loss at the reference distance, dB:
    20*log10(4*pi*d_ref/lambda)."""
    return 20.0 * math.log10(4.0 * math.pi * cfg.reference_distance / cfg.wavelength)


def fresnel_gamma_v(psi: float, epsilon_r: float = 35.0) -> float:
    """|Gamma| of a vertically polarized wave reflecting off a lossless
    dielectric ground at grazing angle psi in (0, pi/2]."""
    if not 0.0 < psi <= 0.5 * math.pi:
        raise ValueError(f"grazing angle must be in (0, pi/2], got {psi}")
    s = math.sin(psi)
    root = math.sqrt(epsilon_r - math.cos(psi) ** 2)
    return abs((epsilon_r * s - root) / (epsilon_r * s + root))


def _infinite_loss(ref_db: float) -> PathLossResult:
    # antenna null (or fully degenerate geometry): no received power
    return PathLossResult(
        total_db=math.inf,
        fspl_ref_db=ref_db,
        geometry_term_db=math.inf,
        components=MappingProxyType({"los": 0.0, "grc": 0.0}),
    )


def _result(ref_db: float, num: float, los_term: float, grc_term: float) -> PathLossResult:
    denom = los_term + grc_term
    if denom <= 0.0:
        return _infinite_loss(ref_db)
    geo = 10.0 * math.log10(num / denom)
    return PathLossResult(
        total_db=ref_db + geo,
        fspl_ref_db=ref_db,
        geometry_term_db=geo,
        components=MappingProxyType({"los": los_term, "grc": grc_term}),
    )


def pl_hover_rx1_vv(
    geom: LinkGeometry,
    model: AntennaModel = DEFAULT_ANTENNA,
    cfg: RfConfig = DEFAULT_RF,
) -> PathLossResult:
    """Hovering UAV to the ground-level receiver, co-polarized: LOS only,
    L = L_ref + 10*log10((x^2 + h^2) / sin^2(arctan(x/h)))."""
    ref = fspl_ref(cfg)
    theta = elevation_angle(geom)
    g = los_gain(model, theta)
    d0_sq = geom.x * geom.x + geom.h * geom.h
    return _result(ref, d0_sq, g * g, 0.0)


def pl_hover_rx2_vv(
    geom: LinkGeometry,
    model: AntennaModel = DEFAULT_ANTENNA,
    cfg: RfConfig = DEFAULT_RF,
) -> PathLossResult:
    """Hovering UAV to the elevated receiver: resolvable LOS plus ground
    reflection, L = L_ref + 10*log10((d0'*d1)^2 /
    ((d1*sin(theta'))^2 + d0'^2*sin(omega)*sin(omega')*|Gamma|^2))."""
    ref = fspl_ref(cfg)
    angles, dists = two_ray_geometry(geom)
    g_los = los_gain(model, angles.theta_prime)
    g_grc = grc_gain(angles.omega, angles.omega_prime)
    gamma = fresnel_gamma_v(angles.psi, cfg.epsilon_r)
    num = (dists.d0_prime * dists.d1) ** 2
    los_term = (dists.d1 * g_los) ** 2
    grc_term = dists.d0_prime**2 * g_grc**2 * gamma**2
    return _result(ref, num, los_term, grc_term)


def pl_move_rx1_vv(
    geom: LinkGeometry,
    model: AntennaModel = DEFAULT_ANTENNA,
    cfg: RfConfig = DEFAULT_RF,
) -> PathLossResult:
    """Circularly moving UAV to the ground-level receiver:
    L = L_ref + 10*log10(d0^2 / (sin(theta) * G_R_circular)); note the
    first power of the TX gain against the mean RX gain."""
    ref = fspl_ref(cfg)
    theta = elevation_angle(geom)
    g = los_gain(model, theta)
    if cfg.harmonize_gains:
        g = g * g
    d0_sq = geom.x * geom.x + geom.h * geom.h
    return _result(ref, d0_sq, g * cfg.g_r_circular, 0.0)


def pl_move_rx2_vv(
    geom: LinkGeometry,
    model: AntennaModel = DEFAULT_ANTENNA,
    cfg: RfConfig = DEFAULT_RF,
) -> PathLossResult:
    """Circularly moving UAV to the elevated receiver:
    L = L_ref + 10*log10((d0'*d1)^2 /
    (d1^2*sin(theta')*G + d0'^2*sin(omega')*G*|Gamma|^2)), first powers and
    the TX-side reflected gain only, as published."""
    ref = fspl_ref(cfg)
    angles, dists = two_ray_geometry(geom)
    g_los = los_gain(model, angles.theta_prime)
    gamma = fresnel_gamma_v(angles.psi, cfg.epsilon_r)
    if cfg.harmonize_gains:
        g_los = g_los * g_los
        g_ref = grc_gain(angles.omega, angles.omega_prime) ** 2
    else:
        g_ref = math.sin(angles.omega_prime)
    num = (dists.d0_prime * dists.d1) ** 2
    los_term = dists.d1**2 * g_los * cfg.g_r_circular
    grc_term = dists.d0_prime**2 * g_ref * cfg.g_r_circular * gamma**2
    return _result(ref, num, los_term, grc_term)


def pl_vh(base: PathLossResult, state: PolarizationState) -> PathLossResult:
    """Cross-polarized loss from a co-polarized baseline:
    L_VH = L_VV + c_pol."""
    penalty = mismatch_penalty_db(state)
    return replace(
        base,
        total_db=base.total_db + penalty,
        penalty_db=base.penalty_db + penalty,
    )


def pl_foliage(cfg: RfConfig = DEFAULT_RF) -> PathLossResult:
    """Foliage-obstructed links: loss pinned at the sounder's dynamic
    range above the reference, flagged as an equipment-limited clamp (not
    a propagation prediction)."""
    ref = fspl_ref(cfg)
    return PathLossResult(
        total_db=ref + cfg.dynamic_range_db,
        fspl_ref_db=ref,
        geometry_term_db=cfg.dynamic_range_db,
        clamped=True,
    )
