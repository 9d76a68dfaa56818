"""Acceptance suite: one test per release criterion, each printing a
pass/fail line with its measured value and tolerance. Run with
``pytest tests/test_acceptance.py -v -s``.
"""
import math
import time

import numpy as np
import pytest

from hoskip import analysis as an
from hoskip import simulation as sim
from hoskip.experiments import ExperimentConfig, cmd_coverage, cmd_hocost
from hoskip.params import HoScheme, NetworkParams


def report(name, ok, detail):
    print(f"ACCEPTANCE {name}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, detail


def test_criterion_1_closed_form_equivalence():
    """Quadrature route matches the eta=4 closed forms to 1e-6 relative on
    50 log-spaced thresholds in [-20, 30] dB, in under 5 s."""
    start = time.monotonic()
    params = NetworkParams(lam=30.0)
    worst = 0.0
    for t in np.logspace(-2.0, 3.0, 50):
        pairs = [
            (an.laplace_interference_outer(t, 4.0, 0.2, 30.0),
             an.laplace_interference_outer_eta4(t, 0.2, 30.0)),
            (an.laplace_interference_skipped(t, 4.0),
             an.laplace_interference_skipped_eta4(t)),
            (an.coverage_connected(t, params),
             an.coverage_connected_eta4(t)),
            (an.coverage_blackout(t, params),
             an.coverage_blackout_eta4(t)),
            (an.coverage_blackout_ic(t, 4.0),
             an.coverage_blackout_ic_eta4(t)),
        ]
        for got, want in pairs:
            worst = max(worst, abs(got - want) / abs(want))
    elapsed = time.monotonic() - start
    report("1 closed-form equivalence",
           worst <= 1e-6 and elapsed < 5.0,
           f"max rel gap {worst:.3e} <= 1e-6, {elapsed:.1f}s < 5s")


def test_criterion_2_spectral_efficiency_regression():
    """R_c=1.49, R_bk=0.21, R_bk(IC)=0.66, R_s=1.07 nats/s/Hz, all +/-0.02."""
    start = time.monotonic()
    rc = an.spectral_efficiency(an.coverage_connected_eta4)
    rbk = an.spectral_efficiency(an.coverage_blackout_eta4)
    rbk_ic = an.spectral_efficiency(an.coverage_blackout_ic_eta4)
    rs = an.spectral_efficiency_skipping(rc, rbk_ic)
    elapsed = time.monotonic() - start
    errs = {"R_c": (rc, 1.49), "R_bk": (rbk, 0.21),
            "R_bk_ic": (rbk_ic, 0.66), "R_s": (rs, 1.07)}
    ok = all(abs(got - want) <= 0.02 for got, want in errs.values())
    detail = ", ".join(f"{k}={got:.4f} (target {want})"
                       for k, (got, want) in errs.items())
    report("2 spectral efficiency", ok and elapsed < 10.0,
           f"{detail}, {elapsed:.1f}s < 10s")


def test_criterion_3_static_coverage_reproduction():
    """Monte Carlo coverage (1e5 trials/point) matches analysis within
    95% CI + 0.005 at T in {-10..15} dB for all states, lam in {10, 30}."""
    start = time.monotonic()
    targets = {"connected": an.coverage_connected_eta4,
               "blackout": an.coverage_blackout_eta4,
               "blackout_ic": an.coverage_blackout_ic_eta4}
    failures = []
    worst = 0.0
    for lam in (10.0, 30.0):
        params = NetworkParams(lam=lam)
        for t_db in (-10.0, -5.0, 0.0, 5.0, 10.0, 15.0):
            t = 10.0 ** (t_db / 10.0)
            for state, fn in targets.items():
                est = sim.simulate_static_coverage(state, t, params, 100_000,
                                                   seed=int(1000 * lam + t_db))
                err = abs(est.probability - fn(t))
                tol = est.ci_halfwidth + 0.005
                worst = max(worst, err - tol)
                if err > tol:
                    failures.append((lam, t_db, state, err, tol))
    elapsed = time.monotonic() - start
    report("3 static coverage",
           not failures and elapsed < 180.0,
           f"36 points, worst err-tol margin {worst:+.4f}, "
           f"failures {failures}, {elapsed:.0f}s < 180s")


def test_criterion_4_ho_rate_law():
    """Aggregated crossing rate matches 4*v*sqrt(lam)/pi within 2% at
    lam in {10, 30, 70}; skipping executes half the crossings, within 2%."""
    start = time.monotonic()
    failures = []
    details = []
    for lam in (10.0, 30.0, 70.0):
        params = NetworkParams(lam=lam)
        crossings = executed = 0
        length = 0.0
        n_seeds = max(200, int(25_000 / (4.0 * math.sqrt(lam) / math.pi * 4.0)))
        for s in range(n_seeds):
            tr = sim.simulate_trajectory(params, 60.0, 4.0, HoScheme.SKIPPING,
                                         seed=s)
            crossings += tr.crossing_count
            executed += tr.ho_count
            length += tr.length_km
        ratio = (crossings / length) / (4.0 * math.sqrt(lam) / math.pi)
        half = executed / crossings
        details.append(f"lam={lam:g}: rate ratio {ratio:.4f}, "
                       f"executed frac {half:.4f} ({crossings} crossings)")
        if abs(ratio - 1.0) > 0.02:
            failures.append((lam, "rate", ratio))
        if abs(half - 0.5) > 0.02:
            failures.append((lam, "half", half))
    elapsed = time.monotonic() - start
    report("4 HO-rate law", not failures and elapsed < 120.0,
           "; ".join(details) + f", {elapsed:.0f}s < 120s")


def test_criterion_5_crossover_velocities():
    """Analytical throughput crossovers: lam=70, d=2s -> 40 +/- 5 km/h;
    lam=70, d=0.7s -> 110 +/- 10 km/h (u_c 0.3/0.15, W=10 MHz, eta=4)."""
    start = time.monotonic()
    v2 = an.crossover_velocity(NetworkParams(lam=70.0, ho_delay_s=2.0),
                               HoScheme.CONVENTIONAL, HoScheme.SKIPPING_IC)
    v07 = an.crossover_velocity(NetworkParams(lam=70.0, ho_delay_s=0.7),
                                HoScheme.CONVENTIONAL, HoScheme.SKIPPING_IC)
    elapsed = time.monotonic() - start
    ok = (v2 is not None and abs(v2 - 40.0) <= 5.0
          and v07 is not None and abs(v07 - 110.0) <= 10.0
          and elapsed < 30.0)
    report("5 crossover velocities", ok,
           f"d=2s: {v2:.1f} km/h (40+/-5), d=0.7s: {v07:.1f} km/h (110+/-10), "
           f"{elapsed:.1f}s < 30s")


def test_criterion_6_ordering_and_monotonicity():
    """Coverage in [0,1], non-increasing in T, C_bk <= C_bk_ic <= C_c;
    skipping HO cost exactly half; R_s exactly the mean of its inputs."""
    ts = np.logspace(-2.0, 3.0, 100)
    cc = np.array([an.coverage_connected_eta4(t) for t in ts])
    cbk = np.array([an.coverage_blackout_eta4(t) for t in ts])
    cic = np.array([an.coverage_blackout_ic_eta4(t) for t in ts])
    ok = True
    for c in (cc, cbk, cic):
        ok &= bool(np.all((c >= 0.0) & (c <= 1.0)))
        ok &= bool(np.all(np.diff(c) <= 1e-15))
    ok &= bool(np.all(cbk <= cic + 1e-12) and np.all(cic <= cc + 1e-12))
    rng = np.random.default_rng(0)
    for _ in range(100):
        v, lam, d = rng.uniform(0, 150), rng.uniform(1, 150), rng.uniform(0, 3)
        c = an.ho_cost(HoScheme.CONVENTIONAL, v, lam, d)
        s = an.ho_cost(HoScheme.SKIPPING, v, lam, d)
        ok &= (s.fraction == 0.5 * c.fraction) or c.saturated
        a, b = rng.uniform(0, 3, size=2)
        ok &= an.spectral_efficiency_skipping(a, b) == 0.5 * (a + b)
    report("6 ordering/monotonicity", ok, "100-point grid + 100 random draws")


def test_criterion_7_stationarity_claim():
    """Mobile-user coverage along conventional trajectories matches the
    stationary connected coverage within CI + 0.01 at T = 0 dB."""
    start = time.monotonic()
    params = NetworkParams(lam=30.0, ho_delay_s=0.0)
    target = an.coverage_connected_eta4(1.0)
    succ = tot = 0
    for s in range(60):
        tr = sim.simulate_trajectory(params, 60.0, 4.0, HoScheme.CONVENTIONAL,
                                     seed=500 + s)
        cov = sim.mobile_coverage_along_trajectory(tr, 1.0, 0.02, seed=700 + s)
        est = cov[sim.STATE_CONNECTED]
        succ += round(est.probability * est.trials)
        tot += est.trials
    est = sim.CoverageEstimate.from_counts(succ, tot)
    err = abs(est.probability - target)
    tol = est.ci_halfwidth + 0.01
    elapsed = time.monotonic() - start
    report("7 stationarity", err <= tol and elapsed < 120.0,
           f"mobile {est.probability:.4f} vs stationary {target:.4f}, "
           f"err {err:.4f} <= {tol:.4f}, {elapsed:.0f}s < 120s")


def test_criterion_8_determinism(tmp_path):
    """Identical config and seed produce byte-identical CSV output."""
    outputs = []
    for name in ("a", "b"):
        cfg = ExperimentConfig.load(seed=11, trials=2000,
                                    out=str(tmp_path / name))
        cfg.data["coverage"]["t_grid_db"] = [0.0, 5.0]
        cov = cmd_coverage(cfg)
        hoc = cmd_hocost(cfg)
        outputs.append(open(cov, "rb").read() + open(hoc, "rb").read())
    report("8 determinism", outputs[0] == outputs[1],
           "coverage + hocost CSVs byte-identical across reruns")
