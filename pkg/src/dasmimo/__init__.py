"""Rate scaling of downlink MIMO cellular networks with co-located,
distributed and small-cell base-station antenna layouts.

Monte Carlo rate estimation and closed-form asymptotics on a 7-cell
hexagonal network.
"""

from .params import LayoutKind, SystemParams, db_to_linear
from .geometry import (
    CellIndex, LayoutRealization, PolarPoint, cell_center, min_access_distance_cdf,
    min_access_distance_pdf, neighbor_cell_distance_cdf, neighbor_cell_distance_pdf,
    own_cell_distance_cdf, own_cell_distance_pdf, sample_disk, sample_layout,
    sample_user_position,
)
from .channel import (
    ChannelRealization, CoincidentPositionError, ca_large_scale_vector, compose_channel,
    large_scale_fading, sample_small_scale,
)
from .precoding import (
    InfeasibleConfigurationError, PrecodeResult, RankDeficientError, RankZeroChannelError,
    bd_precoder, null_space_basis, svd_precoder, waterfill,
)
from .interference import (
    MomentDiagnostics, intercell_covariance, intercell_moment_mc, intercell_power,
    intercell_power_ca, intercell_power_da,
)
from .rate_sim import (
    RateEstimate, assign_small_cells, average_rate, bd_per_antenna_rate,
    single_user_capacity, single_user_rate_chain, small_cell_rate,
)
from .asymptotics import (
    AsymptoticKind, AsymptoticValue, ca_mu_avg, ca_mu_avg_approx, ca_mu_rate, ca_su_avg,
    ca_su_avg_approx, ca_su_rate, da_mu_avg_lb, da_mu_lb, da_su_avg_lb, da_su_lb, mp_density,
    phi, psi_c, psi_d, sc_avg_lb, upsilon,
)
from .experiments import ExperimentConfig, ResultTable, run_figure, run_sweep

__version__ = "0.1.0"

__all__ = [
    "LayoutKind", "SystemParams", "db_to_linear", "CellIndex", "LayoutRealization",
    "PolarPoint", "cell_center", "min_access_distance_cdf", "min_access_distance_pdf",
    "neighbor_cell_distance_cdf", "neighbor_cell_distance_pdf", "own_cell_distance_cdf",
    "own_cell_distance_pdf", "sample_disk", "sample_layout", "sample_user_position",
    "ChannelRealization", "CoincidentPositionError", "ca_large_scale_vector",
    "compose_channel", "large_scale_fading", "sample_small_scale",
    "InfeasibleConfigurationError", "PrecodeResult", "RankDeficientError",
    "RankZeroChannelError", "bd_precoder", "null_space_basis", "svd_precoder", "waterfill",
    "MomentDiagnostics", "intercell_covariance", "intercell_moment_mc", "intercell_power",
    "intercell_power_ca", "intercell_power_da", "RateEstimate", "assign_small_cells",
    "average_rate", "bd_per_antenna_rate", "single_user_capacity", "single_user_rate_chain",
    "small_cell_rate", "AsymptoticKind", "AsymptoticValue", "ca_mu_avg", "ca_mu_avg_approx",
    "ca_mu_rate", "ca_su_avg", "ca_su_avg_approx", "ca_su_rate", "da_mu_avg_lb", "da_mu_lb",
    "da_su_avg_lb", "da_su_lb", "mp_density", "phi", "psi_c", "psi_d", "sc_avg_lb", "upsilon",
    "ExperimentConfig", "ResultTable", "run_figure", "run_sweep",
    "__version__",
]
