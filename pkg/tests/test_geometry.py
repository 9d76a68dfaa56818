import math

import numpy as np
import pytest

from hoskip.errors import InsufficientPointsError, InvalidParameterError
from hoskip.geometry import (PointPattern, default_window_radius,
                             k_nearest_distances, sample_ppp)


def make_pattern(points):
    pts = np.asarray(points, dtype=float)
    return PointPattern(points=pts, window_radius=10.0, intensity=1.0, seed=0)


class TestSamplePpp:
    def test_deterministic_bitwise(self):
        a = sample_ppp(30.0, 2.0, seed=7)
        b = sample_ppp(30.0, 2.0, seed=7)
        assert np.array_equal(a.points, b.points)

    def test_points_inside_window(self):
        pat = sample_ppp(50.0, 3.0, seed=1)
        r = np.hypot(pat.points[:, 0], pat.points[:, 1])
        assert np.all(r <= 3.0)

    def test_invalid_parameters(self):
        with pytest.raises(InvalidParameterError):
            sample_ppp(0.0, 2.0, seed=0)
        with pytest.raises(InvalidParameterError):
            sample_ppp(30.0, -1.0, seed=0)

    def test_mean_count_matches_poisson(self):
        # lam=30, R=2: mean = 30*pi*4, sample mean within 3 standard errors
        lam, R, n = 30.0, 2.0, 10_000
        counts = np.array([len(sample_ppp(lam, R, seed=s)) for s in range(n)])
        mean = lam * math.pi * R * R
        se = math.sqrt(mean / n)
        assert abs(counts.mean() - mean) < 3 * se

    def test_tiny_intensity_mostly_empty(self):
        empties = sum(len(sample_ppp(1e-9, 1.0, seed=s)) == 0
                      for s in range(200))
        assert empties == 200

    def test_min_points_resamples(self):
        pat = sample_ppp(1e-3, 1.0, seed=3, min_points=1)
        assert len(pat) >= 1

    def test_default_window_radius(self):
        assert default_window_radius(30.0) == pytest.approx(15.0 / math.sqrt(30.0))
        assert default_window_radius(100.0) == 2.0


class TestKNearest:
    def test_hand_geometry(self):
        pat = make_pattern([(1, 0), (0, 2), (3, 0)])
        assert k_nearest_distances(pat, (0, 0), 2) == pytest.approx([1.0, 2.0])

    def test_coincident_point(self):
        pat = make_pattern([(0, 0)])
        assert k_nearest_distances(pat, (0, 0), 1) == pytest.approx([0.0])

    def test_matches_brute_force_sort(self):
        rng = np.random.default_rng(11)
        pts = rng.normal(size=(200, 2))
        pat = make_pattern(pts)
        origin = (0.3, -0.2)
        got = k_nearest_distances(pat, origin, 5)
        brute = np.sort(np.hypot(pts[:, 0] - 0.3, pts[:, 1] + 0.2))[:5]
        assert got == pytest.approx(brute)

    def test_permutation_invariant(self):
        rng = np.random.default_rng(5)
        pts = rng.normal(size=(50, 2))
        perm = rng.permutation(50)
        d1 = k_nearest_distances(make_pattern(pts), (0, 0), 10)
        d2 = k_nearest_distances(make_pattern(pts[perm]), (0, 0), 10)
        assert d1 == pytest.approx(d2)

    def test_insufficient_points(self):
        pat = make_pattern([(1, 1)])
        with pytest.raises(InsufficientPointsError):
            k_nearest_distances(pat, (0, 0), 2)


@pytest.fixture(scope="module")
def nearest_two():
    lam, R = 30.0, 2.0
    d = np.array([k_nearest_distances(sample_ppp(lam, R, seed=s,
                                                 min_points=2), (0, 0), 2)
                  for s in range(10_000)])
    return d[:, 0], d[:, 1]


class TestDistanceLaws:
    """Empirical nearest / second-nearest distance laws over many seeds."""

    def test_nearest_distance_cdf_ks(self, nearest_two):
        from scipy import stats
        r0, _ = nearest_two
        lam = 30.0
        res = stats.kstest(r0, lambda r: 1.0 - np.exp(-lam * math.pi * r ** 2))
        critical_1pct = 1.628 / math.sqrt(len(r0))
        assert res.statistic < critical_1pct

    def test_second_vs_nearest_ratio(self, nearest_two):
        # E[(nearest/second)^2] = 1/2 under the joint blackout law
        r1, r0 = nearest_two  # r1 nearest (skipped), r0 second (serving)
        q = (r1 / r0) ** 2
        se = q.std(ddof=1) / math.sqrt(len(q))
        assert abs(q.mean() - 0.5) < 3 * se
