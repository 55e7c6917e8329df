"""Link geometry for an elevated transmitter over flat ground.

All angles are in radians internally; the CLI converts to degrees at its
boundary.  The two-ray layout places the transmitter at height h, the
receiver at height h_rx, separated horizontally by x, with a specular
ground reflection between them (flat-ground image method).
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class LinkGeometry:
    """TX/RX placement: horizontal separation x, TX height h, RX height h_rx (m)."""

    x: float
    h: float
    h_rx: float = 0.0

    def __post_init__(self):
        if not self.x >= 0.0:
            raise ValueError(f"horizontal distance x must be >= 0, got {self.x}")
        if not self.h > 0.0:
            raise ValueError(f"TX height h must be > 0, got {self.h}")
        if not self.h_rx >= 0.0:
            raise ValueError(f"RX height h_rx must be >= 0, got {self.h_rx}")
        if not self.h > self.h_rx:
            raise ValueError(
                f"TX must be above RX for the two-ray layout (h={self.h}, h_rx={self.h_rx})"
            )


@dataclass(frozen=True)
class LinkAngles:
    """Angles of the two-ray layout, radians.

    theta        LOS angle from vertical at the TX (ground-level RX)
    theta_prime  LOS angle from vertical for the elevated RX
    psi          grazing angle of the ground-reflected ray
    omega        reflected-ray angle from the vertical dipole axis at the RX
    omega_prime  same at the TX (equal by specular symmetry)
    """

    theta: float
    theta_prime: float
    psi: float
    omega: float
    omega_prime: float


@dataclass(frozen=True)
class LinkDistances:
    """Path lengths (m): direct to ground-level RX (d0), direct to the
    elevated RX (d0_prime), and via the ground reflection (d1)."""

    d0: float
    d0_prime: float
    d1: float


def elevation_angle(geom: LinkGeometry) -> float:
    """LOS angle from vertical at the TX: arctan(x / h), in [0, pi/2)."""
    return math.atan2(geom.x, geom.h)


def two_ray_geometry(geom: LinkGeometry) -> tuple[LinkAngles, LinkDistances]:
    """All angles and distances of the two-ray layout.

    The specular image method gives psi = arctan((h + h_rx) / x) (pi/2 for
    the vertical link), and the reflected ray leaves/arrives at
    omega = omega_prime = pi/2 - psi from the vertical dipole axis, so
    sin(omega) == cos(psi) exactly.
    """
    x, h, h_rx = geom.x, geom.h, geom.h_rx
    theta = math.atan2(x, h)
    theta_prime = math.atan2(x, h - h_rx)
    psi = math.atan2(h + h_rx, x)  # pi/2 when x == 0
    omega = 0.5 * math.pi - psi
    angles = LinkAngles(
        theta=theta,
        theta_prime=theta_prime,
        psi=psi,
        omega=omega,
        omega_prime=omega,
    )
    dists = LinkDistances(
        d0=math.hypot(x, h),
        d0_prime=math.hypot(x, h - h_rx),
        d1=math.hypot(x, h + h_rx),
    )
    return angles, dists
