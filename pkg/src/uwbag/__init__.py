"""uwbag: UWB air-to-ground channel toolkit.

Synthesis of clustered multipath channel impulse responses, ensemble
analysis (PDP, clusters, fits, delay spread, K-factor, CLEAN), and
analytical two-ray path loss with elevation-dependent antenna gain for
hovering and circling UAV links.
"""

from .antenna import AntennaModel, Orientation, PolarizationState
from .catalog import Rx, Scenario, ScenarioKey, SVParams, catalog_lookup, cpol_lookup
from .geometry import LinkAngles, LinkDistances, LinkGeometry, elevation_angle, two_ray_geometry
from .pathloss import (
    PathLossResult,
    RfConfig,
    fresnel_gamma_v,
    fspl_ref,
    pl_foliage,
    pl_hover_rx1_vv,
    pl_hover_rx2_vv,
    pl_move_rx1_vv,
    pl_move_rx2_vv,
    pl_vh,
)
from .rng import Stream, scan_stream
from .svmodel import (
    Cir,
    grid_capacity,
    mpc_mean_power,
    sample_cluster_arrivals,
    sample_mpc_arrivals,
    synthesize_cir,
    synthesize_ensemble,
)
from .analysis import (
    ChannelStats,
    ClusterRule,
    ClusterSet,
    FitReport,
    Pdp,
    SVEstimate,
    channel_stats,
    clean_deconvolve,
    compute_pdp,
    count_significant_mpcs,
    detect_clusters,
    estimate_sv_params,
    fit_linear_ls,
    fit_sv_piecewise,
    ricean_k_factor,
    rms_delay_spread,
    smooth_pdp,
)

__version__ = "0.1.0"
