"""Built-in channel-model parameter catalog.

One SVParams row per (scenario, receiver, orientation, horizontal
distance): cluster/MPC arrival rates and power decay constants extracted
from the measurement campaign, averaged over UAV heights.  The same
catalog also carries the ground-reflection coefficient magnitudes and the
VH-over-VV polarization mismatch losses per (x, h) geometry.

The catalog ships twice: compiled-in here, and as the versioned data file
``data/catalog.json``.  A test pins both to each other and to a checksum.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from importlib import resources

from .antenna import Orientation

OBSERVATION_WINDOW_NS = 100.0


class Scenario(str, Enum):
    HOVER_OPEN = "hover_open"
    HOVER_FOLIAGE = "hover_foliage"
    MOVING_OPEN = "moving_open"


class Rx(str, Enum):
    RX1 = "rx1"  # on the ground (0.1 m)
    RX2 = "rx2"  # tripod-mounted at 1.5 m


RX_HEIGHT_M = {Rx.RX1: 0.1, Rx.RX2: 1.5}


@dataclass(frozen=True)
class SVParams:
    """One catalog row.

    n_c_mean   mean cluster count over the 100 ns window
    chi        cluster arrival rate, 1/ns
    varsigma   MPC arrival rate within a cluster, 1/ns
    eta        cluster power decay constant, 1/ns
    gamma      MPC power decay constant, 1/ns
    omega00    mean power gain of the first path of the first cluster
    """

    n_c_mean: float
    chi: float
    varsigma: float
    eta: float
    gamma: float
    omega00: float = 1.0

    def __post_init__(self):
        if not self.chi > 0.0:
            raise ValueError(f"chi must be > 0, got {self.chi}")
        if not self.varsigma > 0.0:
            raise ValueError(f"varsigma must be > 0, got {self.varsigma}")
        if self.eta < 0.0 or self.gamma < 0.0:
            raise ValueError("decay constants must be >= 0")
        if not self.n_c_mean > 0.0:
            raise ValueError(f"n_c_mean must be > 0, got {self.n_c_mean}")
        if not self.omega00 > 0.0:
            raise ValueError(f"omega00 must be > 0, got {self.omega00}")


@dataclass(frozen=True)
class ScenarioKey:
    """Lookup key: scenario, receiver, antenna orientation, x in {15, 30} m."""

    scenario: Scenario
    rx: Rx
    orientation: Orientation
    x_m: float

    def __post_init__(self):
        if self.x_m not in (15.0, 30.0):
            raise ValueError(f"x_m must be 15 or 30 (measured grid), got {self.x_m}")

    def describe(self) -> str:
        return (
            f"{self.scenario.value},{self.rx.value},"
            f"{self.orientation.value},x={self.x_m:g}"
        )

    @classmethod
    def parse(cls, text: str) -> "ScenarioKey":
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 4 or not parts[3].startswith("x="):
            raise ValueError(f"bad scenario descriptor: {text!r}")
        return cls(
            scenario=Scenario(parts[0]),
            rx=Rx(parts[1]),
            orientation=Orientation(parts[2]),
            x_m=float(parts[3][2:]),
        )


def _rows(scenario, table):
    out = {}
    for (rx, orient), cols in table.items():
        for x_m, (n_c, chi, eta, varsigma, gamma) in cols.items():
            key = ScenarioKey(scenario, rx, orient, float(x_m))
            out[key] = SVParams(n_c_mean=n_c, chi=chi, varsigma=varsigma, eta=eta, gamma=gamma)
    return out


# Row layout per entry: (N_C, chi, eta, varsigma, gamma)
_HOVER_OPEN = {
    (Rx.RX1, Orientation.VV): {15: (3.33, 0.033, 0.23, 0.10, 8.70), 30: (4.00, 0.040, 0.186, 0.06, 8.66)},
    (Rx.RX2, Orientation.VV): {15: (2.66, 0.027, 0.24, 0.11, 5.50), 30: (2.00, 0.020, 0.16, 0.06, 4.30)},
    (Rx.RX1, Orientation.VH): {15: (1.66, 0.017, 0.215, 0.25, 2.70), 30: (2.66, 0.027, 0.16, 0.15, 5.92)},
    (Rx.RX2, Orientation.VH): {15: (1.66, 0.017, 0.177, 0.26, 2.80), 30: (1.33, 0.013, 0.171, 0.20, 1.88)},
}

_HOVER_FOLIAGE = {
    (Rx.RX1, Orientation.VV): {15: (2.00, 0.020, 0.212, 0.14, 1.30), 30: (2.00, 0.020, 0.21, 0.175, 1.11)},
    (Rx.RX2, Orientation.VV): {15: (2.00, 0.020, 0.24, 0.27, 0.985), 30: (1.66, 0.017, 0.23, 0.21, 1.34)},
    (Rx.RX1, Orientation.VH): {15: (2.00, 0.020, 0.214, 0.34, 0.77), 30: (1.33, 0.013, 0.16, 0.34, 0.811)},
    (Rx.RX2, Orientation.VH): {15: (1.66, 0.017, 0.198, 0.30, 1.40), 30: (1.33, 0.013, 0.20, 0.34, 0.74)},
}

_MOVING_OPEN = {
    (Rx.RX1, Orientation.VV): {15: (2.00, 0.020, 0.14, 0.10, 1.87), 30: (1.66, 0.017, 0.143, 0.082, 1.87)},
    (Rx.RX2, Orientation.VV): {15: (1.66, 0.017, 0.20, 0.084, 3.60), 30: (1.33, 0.013, 0.18, 0.084, 5.20)},
    (Rx.RX1, Orientation.VH): {15: (2.00, 0.020, 0.15, 0.14, 1.76), 30: (1.00, 0.010, 0.12, 0.11, 2.00)},
    (Rx.RX2, Orientation.VH): {15: (1.66, 0.017, 0.205, 0.16, 2.04), 30: (1.00, 0.010, 0.171, 0.16, 1.31)},
}

SV_CATALOG: dict[ScenarioKey, SVParams] = {
    **_rows(Scenario.HOVER_OPEN, _HOVER_OPEN),
    **_rows(Scenario.HOVER_FOLIAGE, _HOVER_FOLIAGE),
    **_rows(Scenario.MOVING_OPEN, _MOVING_OPEN),
}

# |Gamma(psi)| at RX2 (VV) per (x, h); RX1 sits on the ground, no resolvable
# ground-reflected component.
GAMMA_V_CATALOG: dict[tuple[float, float], float] = {
    (15.0, 10.0): 0.59,
    (15.0, 20.0): 0.67,
    (15.0, 30.0): 0.70,
    (30.0, 10.0): 0.39,
    (30.0, 20.0): 0.57,
    (30.0, 30.0): 0.64,
}

# VH-over-VV mismatch loss c_pol in dB per (scenario, rx, x, h); measured
# only for the unobstructed hovering and moving scenarios.
CPOL_CATALOG: dict[tuple[Scenario, Rx, float, float], float] = {
    (Scenario.HOVER_OPEN, Rx.RX1, 15.0, 10.0): 12.9,
    (Scenario.HOVER_OPEN, Rx.RX1, 15.0, 20.0): 7.3,
    (Scenario.HOVER_OPEN, Rx.RX1, 15.0, 30.0): 5.6,
    (Scenario.HOVER_OPEN, Rx.RX1, 30.0, 10.0): 8.0,
    (Scenario.HOVER_OPEN, Rx.RX1, 30.0, 20.0): 6.3,
    (Scenario.HOVER_OPEN, Rx.RX1, 30.0, 30.0): 6.0,
    (Scenario.HOVER_OPEN, Rx.RX2, 15.0, 10.0): 11.2,
    (Scenario.HOVER_OPEN, Rx.RX2, 15.0, 20.0): 8.2,
    (Scenario.HOVER_OPEN, Rx.RX2, 15.0, 30.0): 5.7,
    (Scenario.HOVER_OPEN, Rx.RX2, 30.0, 10.0): 11.3,
    (Scenario.HOVER_OPEN, Rx.RX2, 30.0, 20.0): 8.8,
    (Scenario.HOVER_OPEN, Rx.RX2, 30.0, 30.0): 8.0,
    (Scenario.MOVING_OPEN, Rx.RX1, 15.0, 10.0): 0.6,
    (Scenario.MOVING_OPEN, Rx.RX1, 15.0, 20.0): 0.4,
    (Scenario.MOVING_OPEN, Rx.RX1, 15.0, 30.0): 2.0,
    (Scenario.MOVING_OPEN, Rx.RX1, 30.0, 10.0): 5.4,
    (Scenario.MOVING_OPEN, Rx.RX1, 30.0, 20.0): 4.6,
    (Scenario.MOVING_OPEN, Rx.RX1, 30.0, 30.0): 4.3,
    (Scenario.MOVING_OPEN, Rx.RX2, 15.0, 10.0): 1.8,
    (Scenario.MOVING_OPEN, Rx.RX2, 15.0, 20.0): 0.7,
    (Scenario.MOVING_OPEN, Rx.RX2, 15.0, 30.0): 2.2,
    (Scenario.MOVING_OPEN, Rx.RX2, 30.0, 10.0): 5.8,
    (Scenario.MOVING_OPEN, Rx.RX2, 30.0, 20.0): 2.5,
    (Scenario.MOVING_OPEN, Rx.RX2, 30.0, 30.0): 4.1,
}

CATALOG_FORMAT_VERSION = 1


def catalog_lookup(key: ScenarioKey) -> SVParams:
    """Catalog row for the key; unknown keys raise ValueError."""
    try:
        return SV_CATALOG[key]
    except KeyError:
        raise ValueError(f"no catalog row for scenario key {key.describe()!r}") from None


def cpol_lookup(scenario: Scenario, rx: Rx, x_m: float, h_m: float) -> float:
    """Measured c_pol (dB) for a VH link at this geometry; missing entries
    (e.g. the foliage scenario, or off-grid heights) raise ValueError."""
    try:
        return CPOL_CATALOG[(scenario, rx, float(x_m), float(h_m))]
    except KeyError:
        raise ValueError(
            f"no c_pol entry for {scenario.value}/{rx.value} at x={x_m:g} m, h={h_m:g} m"
        ) from None


def catalog_as_dict() -> dict:
    """The whole built-in catalog in the data-file layout."""
    sv_rows = []
    for key in sorted(SV_CATALOG, key=lambda k: (k.scenario.value, k.rx.value, k.orientation.value, k.x_m)):
        p = SV_CATALOG[key]
        sv_rows.append(
            {
                "scenario": key.scenario.value,
                "rx": key.rx.value,
                "orientation": key.orientation.value,
                "x_m": key.x_m,
                "n_c_mean": p.n_c_mean,
                "chi_per_ns": p.chi,
                "varsigma_per_ns": p.varsigma,
                "eta_per_ns": p.eta,
                "gamma_per_ns": p.gamma,
                "omega00": p.omega00,
            }
        )
    gamma_rows = [
        {"x_m": x, "h_m": h, "gamma_v": g}
        for (x, h), g in sorted(GAMMA_V_CATALOG.items())
    ]
    cpol_rows = [
        {"scenario": s.value, "rx": r.value, "x_m": x, "h_m": h, "c_pol_db": v}
        for (s, r, x, h), v in sorted(
            CPOL_CATALOG.items(), key=lambda kv: (kv[0][0].value, kv[0][1].value, kv[0][2], kv[0][3])
        )
    ]
    return {
        "format_version": CATALOG_FORMAT_VERSION,
        "observation_window_ns": OBSERVATION_WINDOW_NS,
        "sv": sv_rows,
        "gamma_v": gamma_rows,
        "c_pol": cpol_rows,
    }


def catalog_file_text() -> str:
    """The shipped data file, verbatim."""
    return resources.files("uwbag").joinpath("data/catalog.json").read_text()


def load_catalog_file() -> dict:
    return json.loads(catalog_file_text())


def params_from_row(row: dict) -> tuple[ScenarioKey, SVParams]:
    """Parse one SV row in the data-file layout (also the cmd_estimate
    output format, so estimates can be re-ingested as custom rows)."""
    fields = ("n_c_mean", "chi_per_ns", "varsigma_per_ns", "eta_per_ns", "gamma_per_ns")
    missing = [f for f in fields if row.get(f) is None]
    if missing:
        raise ValueError(f"row has undefined parameters: {missing}")
    key = ScenarioKey(
        scenario=Scenario(row["scenario"]),
        rx=Rx(row["rx"]),
        orientation=Orientation(row["orientation"]),
        x_m=float(row["x_m"]),
    )
    params = SVParams(
        n_c_mean=float(row["n_c_mean"]),
        chi=float(row["chi_per_ns"]),
        varsigma=float(row["varsigma_per_ns"]),
        eta=float(row["eta_per_ns"]),
        gamma=float(row["gamma_per_ns"]),
        omega00=float(row.get("omega00", 1.0)),
    )
    return key, params
