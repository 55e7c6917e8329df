"""Elevation-plane gain of the planar elliptical dipole, plus polarization
mismatch bookkeeping.

The dipole's doughnut pattern is modeled as |sin(theta)|**p of the angle
from the vertical axis (p = 1 by default; larger exponents fit single
frequencies better but not the whole band).  Azimuth is treated as
isotropic.  The path-loss formulas compose these raw sine factors exactly
as each equation requires (squared for hovering power terms, first power
for the moving-UAV forms), so this module exposes the bare factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum


class Orientation(str, Enum):
    """TX/RX linear-polarization pairing: co-polarized or cross-polarized."""

    VV = "vv"
    VH = "vh"


@dataclass(frozen=True)
class AntennaModel:
    """Elevation pattern sin(theta)**gain_exponent scaled by max_gain."""

    gain_exponent: float = 1.0
    max_gain: float = 1.0

    def __post_init__(self):
        if not self.gain_exponent > 0.0:
            raise ValueError(f"gain_exponent must be > 0, got {self.gain_exponent}")
        if not self.max_gain > 0.0:
            raise ValueError(f"max_gain must be > 0, got {self.max_gain}")


@dataclass(frozen=True)
class PolarizationState:
    """Orientation plus the measured VH-over-VV mismatch loss in dB.

    c_pol_db is only meaningful for VH; co-polarized links have a fixed
    mismatch factor of 1 (0 dB).
    """

    orientation: Orientation
    c_pol_db: float | None = None

    def __post_init__(self):
        if self.c_pol_db is not None and self.c_pol_db < 0.0:
            raise ValueError(f"c_pol_db must be >= 0, got {self.c_pol_db}")


def los_gain(model: AntennaModel, theta: float) -> float:
    """Elevation-plane gain factor max_gain * |sin(theta)|**p for theta in [0, pi]."""
    if not 0.0 <= theta <= math.pi:
        raise ValueError(f"theta must be in [0, pi], got {theta}")
    return model.max_gain * abs(math.sin(theta)) ** model.gain_exponent


def grc_gain(omega: float, omega_prime: float) -> float:
    """Combined TX/RX factor sqrt(sin(omega) * sin(omega')) of the
    ground-reflected ray, for angles in [0, pi]."""
    if not (0.0 <= omega <= math.pi and 0.0 <= omega_prime <= math.pi):
        raise ValueError("omega and omega_prime must be in [0, pi]")
    return math.sqrt(math.sin(omega) * math.sin(omega_prime))


def mismatch_penalty_db(state: PolarizationState) -> float:
    """Path-loss penalty of the polarization state: 0 dB for VV, the
    catalog c_pol value for VH (an absent VH value is an error, never a
    silent default)."""
    if state.orientation is Orientation.VV:
        return 0.0
    if state.c_pol_db is None:
        raise ValueError("VH polarization state has no c_pol_db value")
    return state.c_pol_db
