"""Analytical layer: distance distributions, interference Laplace
transforms, coverage probabilities, handover cost, spectral efficiency,
and average throughput for conventional and handover-skipping association
in a PPP cellular network.

Every quantity has a general-path-loss quadrature route; at eta = 4 the
closed forms are provided separately so the two routes can be checked
against each other.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy import integrate, optimize

from .errors import DivergentIntegralError, InvalidParameterError, QuadratureError
from .params import (DEFAULT_OVERHEAD, DEFAULT_QUAD, HoScheme, NetworkParams,
                     QuadratureSettings)


# ---------------------------------------------------------------------------
# quadrature helper

def _quad(f, a, b, quad: QuadratureSettings) -> float:
    val, abserr, *rest = integrate.quad(
        f, a, b, epsabs=quad.abs_tol, epsrel=quad.rel_tol,
        limit=quad.max_subdivisions, full_output=1)
    if len(rest) > 1:
        # an explanation string is only attached when quad gave up;
        # accept anyway if the error is negligible absolutely or relatively
        if abserr > max(1e-8, 100.0 * quad.rel_tol * abs(val)):
            achieved = abserr / abs(val) if val else abserr
            raise QuadratureError("integral did not converge", achieved)
    return val


# ---------------------------------------------------------------------------
# service distance distributions

def pdf_service_distance_connected(r: float, lam: float) -> float:
    """Density of the distance to the serving (nearest) BS: 2*lam*pi*r*exp(-lam*pi*r^2)."""
    if not lam > 0:
        raise InvalidParameterError(f"lam must be > 0, got {lam}")
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise InvalidParameterError("r must be >= 0")
    out = 2.0 * lam * math.pi * r * np.exp(-lam * math.pi * r ** 2)
    return out if out.ndim else float(out)


def joint_pdf_blackout(x: float, y: float, lam: float) -> float:
    """Joint density of (serving, skipped) distances in blackout, on 0 <= y <= x.

    The serving BS is the second nearest, at distance x; the skipped
    (nearest) BS is at distance y.
    """
    if not lam > 0:
        raise InvalidParameterError(f"lam must be > 0, got {lam}")
    if y < 0 or x < y:
        raise InvalidParameterError(
            f"support requires 0 <= y <= x, got x={x}, y={y}")
    return 4.0 * (math.pi * lam) ** 2 * x * y * math.exp(-math.pi * lam * x ** 2)


def marginal_pdf_blackout(r: float, lam: float) -> float:
    """Marginal density of the blackout serving distance: 2*(lam*pi)^2*r^3*exp(-lam*pi*r^2)."""
    if not lam > 0:
        raise InvalidParameterError(f"lam must be > 0, got {lam}")
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise InvalidParameterError("r must be >= 0")
    out = 2.0 * (lam * math.pi) ** 2 * r ** 3 * np.exp(-lam * math.pi * r ** 2)
    return out if out.ndim else float(out)


def conditional_pdf_skipped(r: float, r0: float) -> float:
    """Density of the skipped-BS distance given serving distance r0: 2r/r0^2 on [0, r0]."""
    if not r0 > 0:
        raise InvalidParameterError(f"r0 must be > 0, got {r0}")
    if r < 0 or r > r0:
        raise InvalidParameterError(f"r must be in [0, r0], got r={r}, r0={r0}")
    return 2.0 * r / r0 ** 2


# ---------------------------------------------------------------------------
# interference Laplace transforms

def vartheta(T: float, eta: float,
             quad: QuadratureSettings = DEFAULT_QUAD) -> float:
    """Dimensionless outer-interference integral
    T^(2/eta) * integral_{T^(-2/eta)}^inf dw / (1 + w^(eta/2)).

    Equals sqrt(T)*arctan(sqrt(T)) at eta = 4.
    """
    if not T > 0:
        raise InvalidParameterError(f"T must be > 0, got {T}")
    if not eta > 2:
        raise DivergentIntegralError(
            f"integral diverges for eta <= 2, got {eta}")
    a = T ** (-2.0 / eta)
    half = eta / 2.0

    def integrand(w):
        lw = half * math.log(w)
        if lw > 40.0:  # 1/(1+w^h) ~ w^-h to better than 1e-17 relative
            return math.exp(-lw)
        return 1.0 / (1.0 + math.exp(lw))

    return T ** (2.0 / eta) * _quad(integrand, a, np.inf, quad)


def vartheta_eta4(T: float) -> float:
    if not T > 0:
        raise InvalidParameterError(f"T must be > 0, got {T}")
    return math.sqrt(T) * math.atan(math.sqrt(T))


def laplace_interference_outer(T: float, eta: float, r0: float, lam: float,
                               quad: QuadratureSettings = DEFAULT_QUAD) -> float:
    """Laplace transform of the out-of-r0 interference: exp(-pi*lam*r0^2*vartheta)."""
    if r0 < 0:
        raise InvalidParameterError(f"r0 must be >= 0, got {r0}")
    if not lam > 0:
        raise InvalidParameterError(f"lam must be > 0, got {lam}")
    if r0 == 0.0:
        return 1.0
    return math.exp(-math.pi * lam * r0 ** 2 * vartheta(T, eta, quad))


def laplace_interference_outer_eta4(T: float, r0: float, lam: float) -> float:
    return math.exp(-math.pi * lam * r0 ** 2 * vartheta_eta4(T))


def laplace_interference_skipped(T: float, eta: float, r0: float = 1.0,
                                 quad: QuadratureSettings = DEFAULT_QUAD) -> float:
    """Laplace transform of the skipped-BS interference in blackout.

    After substituting u = r/r0 the integral is a function of (T, eta) only;
    r0 enters validation but not the value.
    """
    if not T > 0:
        raise InvalidParameterError(f"T must be > 0, got {T}")
    if not eta > 2:
        raise DivergentIntegralError(f"eta must be > 2, got {eta}")
    if not r0 > 0:
        raise InvalidParameterError(f"r0 must be > 0, got {r0}")
    # 2u / (1 + T u^-eta) rewritten to avoid overflow of u^-eta near 0
    return _quad(lambda u: 2.0 * u ** (eta + 1.0) / (u ** eta + T), 0.0, 1.0, quad)


def laplace_interference_skipped_eta4(T: float) -> float:
    if not T > 0:
        raise InvalidParameterError(f"T must be > 0, got {T}")
    return 1.0 - math.sqrt(T) * math.atan(1.0 / math.sqrt(T))


# ---------------------------------------------------------------------------
# coverage probabilities

def coverage_connected(T: float, params: NetworkParams,
                       quad: QuadratureSettings = DEFAULT_QUAD) -> float:
    """Best-connected coverage P{SINR >= T} by quadrature over the serving
    distance."""
    if not T > 0:
        raise InvalidParameterError(f"T must be > 0, got {T}")
    th = vartheta(T, params.eta, quad)
    lam, eta = params.lam, params.eta
    ns = T * params.noise / params.power

    def integrand(x):
        q = math.pi * lam * x * x * (1.0 + th)
        if q > 745.0:  # exp underflows; avoids overflow of x**eta far out
            return 0.0
        return 2.0 * math.pi * lam * x * math.exp(-ns * x ** eta - q)

    return _quad(integrand, 0.0, np.inf, quad)


def coverage_connected_eta4(T: float) -> float:
    """Closed form at eta = 4, noise-free: 1 / (1 + sqrt(T)*arctan(sqrt(T)))."""
    return 1.0 / (1.0 + vartheta_eta4(T))


def coverage_blackout(T: float, params: NetworkParams,
                      quad: QuadratureSettings = DEFAULT_QUAD) -> float:
    """Blackout coverage (served by second-nearest BS, nearest interfering).

    The inner integral over the skipped-BS distance reduces, after
    u = x/y, to (y^2/2) times the skipped-BS Laplace transform, which is
    evaluated once; the outer integral over the serving distance is done
    by quadrature.
    """
    if not T > 0:
        raise InvalidParameterError(f"T must be > 0, got {T}")
    lam, eta = params.lam, params.eta
    th = vartheta(T, eta, quad)
    ls = laplace_interference_skipped(T, eta, quad=quad)
    ns = T * params.noise / params.power

    def integrand(y):
        q = lam * math.pi * y * y * (th + 1.0)
        if q > 745.0:
            return 0.0
        return (2.0 * (lam * math.pi) ** 2 * ls * y ** 3
                * math.exp(-ns * y ** eta - q))

    return _quad(integrand, 0.0, np.inf, quad)


def coverage_blackout_eta4(T: float) -> float:
    """Closed form at eta = 4, noise-free:
    (1 - sqrt(T)*arctan(1/sqrt(T))) / (1 + sqrt(T)*arctan(sqrt(T)))^2."""
    return laplace_interference_skipped_eta4(T) / (1.0 + vartheta_eta4(T)) ** 2


def coverage_blackout_ic(T: float, eta: float,
                         quad: QuadratureSettings = DEFAULT_QUAD) -> float:
    """Blackout coverage with nearest-BS interference cancellation:
    1 / (1 + vartheta(T, eta))^2."""
    th = vartheta(T, eta, quad)
    return math.exp(-2.0 * math.log1p(th))


def coverage_blackout_ic_eta4(T: float) -> float:
    return 1.0 / (1.0 + vartheta_eta4(T)) ** 2


# ---------------------------------------------------------------------------
# spectral efficiency and throughput

def spectral_efficiency(coverage_fn: Callable[[float], float],
                        quad: QuadratureSettings = DEFAULT_QUAD) -> float:
    """Mean of ln(1 + SINR) in nats/s/Hz from a coverage function:
    integral_0^inf coverage(t) / (1 + t) dt.

    Evaluated after the logarithmic substitution t = e^z - 1, which turns
    the integral into integral_0^inf coverage(e^z - 1) dz.
    """
    def integrand(z):
        if z > 700.0:  # e^z overflows; coverage is 0 there for any real network
            return 0.0
        t = math.expm1(z)
        if t <= 0.0:
            t = 1e-300
        return coverage_fn(t)

    return _quad(integrand, 0.0, np.inf, quad)


def spectral_efficiency_skipping(r_connected: float, r_blackout: float) -> float:
    """Skipping-user spectral efficiency: the user spends half its time best
    connected and half in blackout, so the rate is the plain mean."""
    if r_connected < 0 or r_blackout < 0:
        raise InvalidParameterError("spectral efficiencies must be >= 0")
    return 0.5 * (r_connected + r_blackout)


@functools.lru_cache(maxsize=256)
def _scheme_rates(params: NetworkParams,
                  quad: QuadratureSettings) -> dict:
    """Spectral efficiencies (nats/s/Hz) per scheme for these parameters.

    eta = 4 noise-free uses the closed-form coverage expressions; anything
    else goes through the general quadrature route.
    """
    if params.eta == 4.0 and params.noise == 0.0:
        rc = spectral_efficiency(coverage_connected_eta4, quad)
        rbk = spectral_efficiency(coverage_blackout_eta4, quad)
        rbk_ic = spectral_efficiency(coverage_blackout_ic_eta4, quad)
    else:
        rc = spectral_efficiency(lambda t: coverage_connected(t, params, quad), quad)
        rbk = spectral_efficiency(lambda t: coverage_blackout(t, params, quad), quad)
        rbk_ic = spectral_efficiency(
            lambda t: coverage_blackout_ic(t, params.eta, quad), quad)
    return {
        HoScheme.CONVENTIONAL: rc,
        HoScheme.SKIPPING: spectral_efficiency_skipping(rc, rbk),
        HoScheme.SKIPPING_IC: spectral_efficiency_skipping(rc, rbk_ic),
    }


def scheme_spectral_efficiency(params: NetworkParams, scheme: HoScheme,
                               quad: QuadratureSettings = DEFAULT_QUAD) -> float:
    """Spectral efficiency of a scheme in nats/s/Hz (cached per parameters)."""
    return _scheme_rates(params, quad)[scheme]


# ---------------------------------------------------------------------------
# handover rate and cost

def ho_rate(velocity_kmh: float, lam: float) -> float:
    """Handover (Voronoi cell crossing) rate in events/hour: 4*v*sqrt(lam)/pi."""
    if velocity_kmh < 0:
        raise InvalidParameterError(f"velocity must be >= 0, got {velocity_kmh}")
    if not lam > 0:
        raise InvalidParameterError(f"lam must be > 0, got {lam}")
    return 4.0 * velocity_kmh * math.sqrt(lam) / math.pi


@dataclass(frozen=True)
class HoCost:
    """Fraction of time spent in handover, clamped to [0, 1].

    ``saturated`` flags inputs where the raw formula reached or exceeded 1,
    i.e. handover signaling would consume all time.
    """

    fraction: float
    saturated: bool


def ho_cost(scheme: HoScheme, velocity_kmh: float, lam: float,
            ho_delay_s: float) -> HoCost:
    """Time fraction lost to handovers. Skipping halves the executed
    handovers, so its cost is exactly half the conventional one."""
    if ho_delay_s < 0:
        raise InvalidParameterError(f"ho_delay_s must be >= 0, got {ho_delay_s}")
    raw = ho_rate(velocity_kmh, lam) * ho_delay_s / 3600.0
    if scheme in (HoScheme.SKIPPING, HoScheme.SKIPPING_IC):
        raw *= 0.5
    return HoCost(fraction=min(raw, 1.0), saturated=raw >= 1.0)


# ---------------------------------------------------------------------------
# average throughput

@dataclass(frozen=True)
class Throughput:
    """Average throughput in nats/s (bandwidth times nats/s/Hz).

    ``saturated`` means the handover cost reached 1 and the throughput was
    clamped to zero. Divide by ln 2 for bits/s.
    """

    value: float
    saturated: bool

    @property
    def value_bits(self) -> float:
        return self.value / math.log(2.0)


def average_throughput(params: NetworkParams, scheme: HoScheme,
                       velocity_kmh: float,
                       quad: QuadratureSettings = DEFAULT_QUAD,
                       overhead_fraction: Optional[float] = None) -> Throughput:
    """W * R_scheme * (1 - u_c) * (1 - D_HO) in nats/s.

    ``overhead_fraction`` overrides params.overhead_fraction; pass the
    per-scheme defaults from DEFAULT_OVERHEAD to reproduce the reference
    setup (0.3 conventional, 0.15 skipping).
    """
    uc = params.overhead_fraction if overhead_fraction is None else overhead_fraction
    if not 0 <= uc < 1:
        raise InvalidParameterError(f"overhead_fraction must be in [0,1), got {uc}")
    cost = ho_cost(scheme, velocity_kmh, params.lam, params.ho_delay_s)
    if cost.saturated:
        return Throughput(value=0.0, saturated=True)
    rate = scheme_spectral_efficiency(params, scheme, quad)
    value = params.bandwidth_hz * rate * (1.0 - uc) * (1.0 - cost.fraction)
    return Throughput(value=value, saturated=False)


def crossover_velocity(params: NetworkParams, scheme_a: HoScheme,
                       scheme_b: HoScheme,
                       quad: QuadratureSettings = DEFAULT_QUAD,
                       v_max: float = 300.0,
                       overhead: Optional[dict] = None) -> Optional[float]:
    """Smallest v > 0 where scheme_b's throughput reaches scheme_a's.

    Scans (0, v_max] for a sign change of the throughput gap and refines by
    bisection. Returns None when scheme_b never catches up below v_max.
    Overheads default to the per-scheme reference values.
    """
    ov = dict(DEFAULT_OVERHEAD)
    if overhead:
        ov.update(overhead)

    def gap(v):
        ta = average_throughput(params, scheme_a, v, quad, ov[scheme_a])
        tb = average_throughput(params, scheme_b, v, quad, ov[scheme_b])
        return tb.value - ta.value

    n_steps = 300
    vs = np.linspace(0.0, v_max, n_steps + 1)
    g_prev = gap(1e-9)
    if g_prev >= 0.0:
        return 0.0
    for v_lo, v_hi in zip(vs[:-1], vs[1:]):
        g = gap(v_hi)
        if g >= 0.0:
            return float(optimize.brentq(gap, max(v_lo, 1e-9), v_hi, xtol=1e-6))
    return None
