"""Coverage, handover cost, and throughput analysis for handover skipping
in dense PPP-modeled cellular networks, with Monte Carlo verification."""

from .analysis import (average_throughput, coverage_blackout,
                       coverage_blackout_eta4, coverage_blackout_ic,
                       coverage_blackout_ic_eta4, coverage_connected,
                       coverage_connected_eta4, crossover_velocity, ho_cost,
                       ho_rate, laplace_interference_outer,
                       laplace_interference_skipped, spectral_efficiency,
                       spectral_efficiency_skipping, vartheta)
from .geometry import PointPattern, k_nearest_distances, sample_ppp
from .params import (DEFAULT_OVERHEAD, HoScheme, NetworkParams,
                     QuadratureSettings, db_to_linear)
from .simulation import (CoverageEstimate, TrajectoryTrace,
                         mobile_coverage_along_trajectory,
                         simulate_static_coverage, simulate_trajectory)

__version__ = "0.1.0"

__all__ = [
    "NetworkParams", "HoScheme", "QuadratureSettings", "DEFAULT_OVERHEAD",
    "db_to_linear",
    "PointPattern", "sample_ppp", "k_nearest_distances",
    "vartheta", "laplace_interference_outer", "laplace_interference_skipped",
    "coverage_connected", "coverage_connected_eta4",
    "coverage_blackout", "coverage_blackout_eta4",
    "coverage_blackout_ic", "coverage_blackout_ic_eta4",
    "spectral_efficiency", "spectral_efficiency_skipping",
    "ho_rate", "ho_cost", "average_throughput", "crossover_velocity",
    "CoverageEstimate", "TrajectoryTrace", "simulate_static_coverage",
    "simulate_trajectory", "mobile_coverage_along_trajectory",
]
