"""Monte Carlo verification engines.

Two engines live here: a static SINR coverage estimator (fresh PPP per
trial, user at the origin, Rayleigh fading) and a trajectory simulator
that walks a straight line through a fixed realization, executing the
actual handover protocol (every crossing for conventional, alternate
crossings for skipping) and recording serving state over time.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.spatial import cKDTree

from . import geometry
from .errors import InvalidParameterError, WindowTooSmallError
from .geometry import PointPattern, default_window_radius, derive_rng, sample_ppp
from .params import HoScheme, NetworkParams

STATE_CONNECTED = "connected"
STATE_BLACKOUT = "blackout"
STATE_HANDOVER = "in_handover"

_CHUNK = 4000  # trials per vectorized batch (memory / speed tradeoff)


@dataclass(frozen=True)
class CoverageEstimate:
    """Empirical coverage probability with a 95% normal-approximation CI."""

    probability: float
    trials: int
    ci_halfwidth: float

    @staticmethod
    def from_counts(successes: int, trials: int) -> "CoverageEstimate":
        if trials <= 0:
            return CoverageEstimate(probability=float("nan"), trials=0,
                                    ci_halfwidth=float("nan"))
        p = successes / trials
        hw = 1.96 * math.sqrt(p * (1.0 - p) / trials)
        return CoverageEstimate(probability=p, trials=trials, ci_halfwidth=hw)


def simulate_static_coverage(scheme_state: str, T: float,
                             params: NetworkParams, trials: int,
                             seed: int,
                             window_radius: Optional[float] = None) -> CoverageEstimate:
    """Estimate P{SINR >= T} for a user at the origin.

    States: ``connected`` serves the nearest BS; ``blackout`` serves the
    second nearest with the nearest interfering; ``blackout_ic`` serves the
    second nearest with the nearest BS's signal cancelled.

    Only distances from the origin matter, so each trial draws a Poisson
    point count and i.i.d. radii directly (equivalent to sampling the full
    planar pattern). Trials are batched; each batch gets its own derived
    RNG, so the result is independent of batch scheduling.
    """
    if scheme_state not in ("connected", "blackout", "blackout_ic"):
        raise InvalidParameterError(f"unknown scheme_state {scheme_state!r}")
    if trials < 1:
        raise InvalidParameterError(f"trials must be >= 1, got {trials}")
    if not T > 0:
        raise InvalidParameterError(f"T must be > 0, got {T}")

    R = window_radius if window_radius is not None else default_window_radius(params.lam)
    mu = params.lam * math.pi * R * R
    eta, noise, power = params.eta, params.noise, params.power

    successes = 0
    done = 0
    batch_index = 0
    while done < trials:
        n = min(_CHUNK, trials - done)
        rng = derive_rng(seed, batch_index)
        counts = rng.poisson(mu, n)
        counts = np.maximum(counts, 2)  # degenerate windows: resample policy
        m = int(counts.max())
        # uniform on the disk: squared radius is uniform on [0, R^2];
        # working with r^2 avoids the sqrt and a fractional power at eta=4
        r2 = (R * R) * rng.random((n, m))
        invalid = np.arange(m)[None, :] >= counts[:, None]
        r2[invalid] = np.inf
        h = rng.exponential(size=(n, m))
        with np.errstate(over="ignore"):
            if eta == 4.0:
                p = h / (r2 * r2)        # inf distance -> zero power
            else:
                p = h * r2 ** (-eta / 2.0)
        p[invalid] = 0.0
        total = p.sum(axis=1) * power

        two = np.argpartition(r2, 1, axis=1)[:, :2]
        rows = np.arange(n)
        d2 = np.take_along_axis(r2, two, axis=1)
        order = np.argsort(d2, axis=1)
        i0 = two[rows, order[:, 0]]      # nearest
        i1 = two[rows, order[:, 1]]      # second nearest
        p0 = power * p[rows, i0]
        p1 = power * p[rows, i1]

        if scheme_state == "connected":
            signal = p0
            interference = total - p0
        elif scheme_state == "blackout":
            signal = p1
            interference = total - p1
        else:  # blackout_ic
            signal = p1
            interference = total - p1 - p0

        sinr = signal / (interference + noise)
        successes += int(np.count_nonzero(sinr >= T))
        done += n
        batch_index += 1

    return CoverageEstimate.from_counts(successes, trials)


# ---------------------------------------------------------------------------
# trajectory simulation

@dataclass(frozen=True)
class Segment:
    """One homogeneous stretch of the trajectory (times in hours)."""

    t_start: float
    t_end: float
    serving: int       # BS index into the pattern, -1 while in handover
    state: str         # connected | blackout | in_handover
    previous: int = -1  # BS retained before the handover/skip, for diagnostics


@dataclass
class TrajectoryTrace:
    """Result of walking one straight line through a fixed PPP realization.

    Segments tile [0, duration_h] without gaps. Crossing/handover counts
    are per trace; rates follow by dividing by duration or distance.
    Geometry references are kept so SINR can be re-sampled along the path.
    """

    pattern: PointPattern
    params: NetworkParams
    origin: np.ndarray          # start point of the line, km
    direction: np.ndarray       # unit vector
    length_km: float
    velocity_kmh: float
    scheme: HoScheme
    seed: int
    segments: list = field(default_factory=list)
    crossing_count: int = 0     # Voronoi boundary crossings
    ho_count: int = 0           # handovers actually executed

    @property
    def duration_h(self) -> float:
        return self.length_km / self.velocity_kmh

    def position_at(self, t_h: float) -> np.ndarray:
        return self.origin + self.direction * (self.velocity_kmh * t_h)

    def segment_at(self, t_h: float) -> Segment:
        for seg in self.segments:
            if seg.t_start <= t_h < seg.t_end:
                return seg
        return self.segments[-1]


def _crossings(tree: cKDTree, start: np.ndarray, direction: np.ndarray,
               length: float, step: float):
    """Arc-length positions where the nearest-BS identity changes, plus the
    cell (BS index) sequence. Boundaries are refined by bisection."""
    n_steps = max(2, int(math.ceil(length / step)) + 1)
    s = np.linspace(0.0, length, n_steps)
    pts = start[None, :] + s[:, None] * direction[None, :]
    _, ids = tree.query(pts)

    cells = [int(ids[0])]
    cross_s = []
    for i in range(1, n_steps):
        if ids[i] != ids[i - 1]:
            lo, hi = s[i - 1], s[i]
            id_lo = int(ids[i - 1])
            for _ in range(40):
                mid = 0.5 * (lo + hi)
                _, mid_id = tree.query(start + mid * direction)
                if int(mid_id) == id_lo:
                    lo = mid
                else:
                    hi = mid
            cross_s.append(0.5 * (lo + hi))
            cells.append(int(ids[i]))
    return cross_s, cells


def simulate_trajectory(params: NetworkParams, velocity_kmh: float,
                        length_km: float, scheme: HoScheme, seed: int,
                        window_radius: Optional[float] = None) -> TrajectoryTrace:
    """Walk a straight line with random orientation through one PPP
    realization, executing the scheme's handover protocol.

    Conventional hands over at every Voronoi crossing. Skipping executes
    only alternate crossings: the first cell is served best-connected, the
    first crossing is skipped (blackout, retaining the previous BS), the
    next executes, and so on. Each executed handover opens a d-second
    in-handover interval starting at the crossing.
    """
    if not length_km > 0:
        raise InvalidParameterError(f"length_km must be > 0, got {length_km}")
    if not velocity_kmh > 0:
        raise InvalidParameterError(
            f"velocity_kmh must be > 0, got {velocity_kmh}")

    base_R = default_window_radius(params.lam)
    needed = 2.0 * length_km / 3.0  # keeps the line >= R/4 from the boundary
    R = window_radius if window_radius is not None else max(base_R, 1.05 * needed)
    if length_km / 2.0 > 0.75 * R:
        raise WindowTooSmallError(
            f"trajectory of {length_km} km plus guard margin does not fit "
            f"in window radius {R} km")

    pattern = sample_ppp(params.lam, R, seed, min_points=2)
    rng = derive_rng(seed, 1_000_003)  # orientation; offset clear of resamples
    phi = 2.0 * math.pi * rng.random()
    direction = np.array([math.cos(phi), math.sin(phi)])
    start = -0.5 * length_km * direction  # centered chord through the origin

    tree = cKDTree(pattern.points)
    step = 0.005 / math.sqrt(params.lam)
    cross_s, cells = _crossings(tree, start, direction, length_km, step)

    v = velocity_kmh
    duration = length_km / v
    delay_h = params.ho_delay_s / 3600.0
    cross_t = [s / v for s in cross_s]

    segments: list[Segment] = []
    ho_count = 0

    def emit(t0, t1, serving, state, previous=-1):
        if t1 > t0:
            segments.append(Segment(t0, t1, serving, state, previous))

    if scheme == HoScheme.CONVENTIONAL:
        t_prev = 0.0
        serving = cells[0]
        for k, tc in enumerate(cross_t):
            emit(t_prev, tc, serving, STATE_CONNECTED)
            ho_count += 1
            new = cells[k + 1]
            t_ho_end = min(tc + delay_h, duration,
                           cross_t[k + 1] if k + 1 < len(cross_t) else duration)
            emit(tc, t_ho_end, -1, STATE_HANDOVER, previous=serving)
            serving = new
            t_prev = t_ho_end
        emit(t_prev, duration, serving, STATE_CONNECTED)
    else:
        # skip-one protocol: crossings alternate skip, execute, skip, ...
        t_prev = 0.0
        serving = cells[0]
        for k, tc in enumerate(cross_t):
            execute = (k % 2 == 1)
            state = STATE_CONNECTED if k % 2 == 0 else STATE_BLACKOUT
            emit(t_prev, tc, serving, state)
            if execute:
                ho_count += 1
                new = cells[k + 1]
                t_ho_end = min(tc + delay_h, duration,
                               cross_t[k + 1] if k + 1 < len(cross_t) else duration)
                emit(tc, t_ho_end, -1, STATE_HANDOVER, previous=serving)
                serving = new
                t_prev = t_ho_end
            else:
                # entered the skipped cell: stay on the previous BS (blackout)
                t_prev = tc
        final_state = STATE_CONNECTED if len(cross_t) % 2 == 0 else STATE_BLACKOUT
        emit(t_prev, duration, serving, final_state)

    return TrajectoryTrace(pattern=pattern, params=params,
                           origin=start, direction=direction,
                           length_km=length_km, velocity_kmh=velocity_kmh,
                           scheme=scheme, seed=seed, segments=segments,
                           crossing_count=len(cross_s), ho_count=ho_count)


def mobile_coverage_along_trajectory(trace: TrajectoryTrace, T: float,
                                     sample_spacing_km: float,
                                     seed: int) -> dict:
    """Empirical per-state coverage sampled along a trajectory.

    SINR is evaluated at equally spaced points with fresh Rayleigh fading
    per sample; each sample is classified by the trace's connection state.
    Blackout samples are evaluated twice: serving the BS the protocol
    actually retained (key ``blackout``) and serving the second-nearest BS
    as the stationary analysis assumes (key ``blackout_second_nearest``).
    """
    if not sample_spacing_km > 0:
        raise InvalidParameterError(
            f"sample_spacing_km must be > 0, got {sample_spacing_km}")
    n = int(trace.length_km / sample_spacing_km)
    counts = {STATE_CONNECTED: [0, 0], STATE_BLACKOUT: [0, 0],
              "blackout_second_nearest": [0, 0]}
    if n == 0:
        return {k: CoverageEstimate.from_counts(0, 0) for k in counts}

    rng = derive_rng(seed, 0)
    pts = trace.pattern.points
    eta = trace.params.eta
    noise = trace.params.noise / trace.params.power
    v = trace.velocity_kmh

    for i in range(n):
        s = (i + 0.5) * sample_spacing_km
        t_h = s / v
        seg = trace.segment_at(t_h)
        if seg.state == STATE_HANDOVER:
            continue
        pos = trace.origin + s * trace.direction
        d = np.hypot(pts[:, 0] - pos[0], pts[:, 1] - pos[1])
        h = rng.exponential(size=len(d))
        p = h * d ** (-eta)
        total = p.sum()

        if seg.state == STATE_CONNECTED:
            serve = int(np.argmin(d))
            sinr = p[serve] / (total - p[serve] + noise)
            counts[STATE_CONNECTED][1] += 1
            counts[STATE_CONNECTED][0] += int(sinr >= T)
        else:
            serve = seg.serving
            sinr = p[serve] / (total - p[serve] + noise)
            counts[STATE_BLACKOUT][1] += 1
            counts[STATE_BLACKOUT][0] += int(sinr >= T)
            # second-nearest approximation used by the stationary analysis
            two = np.argpartition(d, 1)[:2]
            second = int(two[np.argmax(d[two])])
            sinr2 = p[second] / (total - p[second] + noise)
            counts["blackout_second_nearest"][1] += 1
            counts["blackout_second_nearest"][0] += int(sinr2 >= T)

    return {k: CoverageEstimate.from_counts(c[0], c[1])
            for k, c in counts.items()}
