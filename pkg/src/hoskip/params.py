"""Network parameter containers and scheme definitions.

Units follow the figure axes of the study this library supports:
BS intensity in BS/km^2, velocity in km/h, handover delay in seconds,
bandwidth in Hz. Transmit power and noise share an arbitrary common
normalization (the default setup is interference limited, noise = 0).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import InvalidParameterError


class HoScheme(enum.Enum):
    """Handover scheme: conventional always-best-connected association,
    skip-one handover skipping, or skipping with nearest-BS interference
    cancellation while in blackout."""

    CONVENTIONAL = "conventional"
    SKIPPING = "skipping"
    SKIPPING_IC = "skipping_ic"


#: Control-overhead fractions used by the reference numerical setup.
DEFAULT_OVERHEAD = {
    HoScheme.CONVENTIONAL: 0.3,
    HoScheme.SKIPPING: 0.15,
    HoScheme.SKIPPING_IC: 0.15,
}


@dataclass(frozen=True)
class NetworkParams:
    """Single-tier downlink network parameters.

    ``eta`` must exceed 2 for the aggregate interference to be finite.
    """

    lam: float = 30.0            # BS intensity, BS/km^2
    power: float = 1.0           # common EIRP, normalized
    eta: float = 4.0             # path-loss exponent
    noise: float = 0.0           # sigma^2, same normalization as power
    bandwidth_hz: float = 10e6   # W
    overhead_fraction: float = 0.3  # u_c in [0, 1)
    ho_delay_s: float = 0.7      # d

    def __post_init__(self):
        if not self.lam > 0:
            raise InvalidParameterError(f"lam must be > 0, got {self.lam}")
        if not self.power > 0:
            raise InvalidParameterError(f"power must be > 0, got {self.power}")
        if not self.eta > 2:
            raise InvalidParameterError(
                f"eta must be > 2 for interference convergence, got {self.eta}")
        if self.noise < 0:
            raise InvalidParameterError(f"noise must be >= 0, got {self.noise}")
        if not self.bandwidth_hz > 0:
            raise InvalidParameterError(
                f"bandwidth_hz must be > 0, got {self.bandwidth_hz}")
        if not 0 <= self.overhead_fraction < 1:
            raise InvalidParameterError(
                f"overhead_fraction must be in [0, 1), got {self.overhead_fraction}")
        if self.ho_delay_s < 0:
            raise InvalidParameterError(
                f"ho_delay_s must be >= 0, got {self.ho_delay_s}")


@dataclass(frozen=True)
class QuadratureSettings:
    """Tolerances for the adaptive quadrature used by the analytical layer.

    Improper integrals are evaluated after mapping the infinite tail to a
    finite interval (scipy's standard transformation), so the tolerances
    apply to the transformed problem.
    """

    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_subdivisions: int = 200

    def __post_init__(self):
        if not self.rel_tol > 0 or not self.abs_tol > 0:
            raise InvalidParameterError("quadrature tolerances must be > 0")
        if self.max_subdivisions < 1:
            raise InvalidParameterError("max_subdivisions must be >= 1")


DEFAULT_QUAD = QuadratureSettings()


def db_to_linear(t_db: float) -> float:
    """Convert an SINR threshold from dB to linear scale."""
    return 10.0 ** (t_db / 10.0)


def linear_to_db(t: float) -> float:
    if not t > 0:
        raise InvalidParameterError(f"linear threshold must be > 0, got {t}")
    return 10.0 * math.log10(t)
