import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypclust.errors import ApproximationDomainError, InvalidParameters, WindowUnavailable
from hypclust.hypgeom import (ModelParams, PolarVertex, critical_angle, disc_angle_window,
                              distance_approx, distance_from_polar, hyperbolic_distance,
                              radius_from_count, relative_angle)


def _mp_distance(r_u, r_v, theta, zeta):
    mpmath.mp.dps = 60
    r_u, r_v, theta, zeta = (mpmath.mpf(x) for x in (r_u, r_v, theta, zeta))
    c = mpmath.cosh(zeta * r_u) * mpmath.cosh(zeta * r_v) - mpmath.sinh(zeta * r_u) * mpmath.sinh(zeta * r_v) * mpmath.cos(theta)
    return float(mpmath.acosh(c) / zeta)


class TestRadius:
    def test_n_equal_nu_gives_zero(self):
        assert radius_from_count(3.0, 3.0, 0.7) == 0.0

    def test_inverse_of_definition(self):
        assert radius_from_count(math.exp(10), 1.0, 2.0) == pytest.approx(10.0, rel=1e-14)

    def test_reference_value(self):
        expected = float(2 * mpmath.log(mpmath.mpf(20000) / mpmath.mpf("1.5")))
        assert radius_from_count(20000, 1.5, 1.0) == pytest.approx(expected, rel=1e-14)
        assert expected == pytest.approx(18.99604, abs=1e-5)

    @given(st.integers(1, 10**9), st.floats(0.01, 1.0), st.floats(0.05, 5.0))
    def test_round_trip(self, n, nu, zeta):
        r = radius_from_count(n, nu, zeta)
        assert nu * math.exp(zeta * r / 2) == pytest.approx(n, rel=1e-12)

    @pytest.mark.parametrize("args", [(1, 2.0, 1.0), (5, 0.0, 1.0), (5, 1.0, -1.0), (0, 0.5, 1.0)])
    def test_invalid(self, args):
        with pytest.raises(InvalidParameters):
            radius_from_count(*args)

    def test_model_params(self):
        p = ModelParams(zeta=1.0, alpha=1.5, beta=2.0, nu=1.0, n=1000)
        assert p.radius == pytest.approx(2 * math.log(1000))
        assert p.with_n(2000).radius > p.radius
        with pytest.raises(InvalidParameters):
            ModelParams(zeta=1.0, alpha=-1.0, beta=2.0, nu=1.0, n=10)
        with pytest.raises(InvalidParameters):
            ModelParams(zeta=1.0, alpha=1.0, beta=2.0, nu=1.0, n=2.5)


class TestPolarVertex:
    def test_type_is_complement(self):
        v = PolarVertex.at(3.0, 1.0, 10.0)
        assert v.t == 7.0
        assert PolarVertex.of_type(7.0, 1.0, 10.0) == v

    @pytest.mark.parametrize("r,theta", [(-0.1, 1.0), (10.5, 1.0), (1.0, 0.0), (1.0, 7.0)])
    def test_rejects_out_of_range(self, r, theta):
        with pytest.raises(InvalidParameters):
            PolarVertex.at(r, theta, 10.0)

    def test_relative_angle(self):
        assert relative_angle(0.1, 2 * math.pi - 0.1) == pytest.approx(0.2)
        assert relative_angle(1.0, 1.0 + math.pi) == pytest.approx(math.pi)
        assert relative_angle(2.0, 0.5) == pytest.approx(1.5)


class TestDistance:
    def test_same_ray(self):
        u, v = PolarVertex.at(7, 1.0, 20), PolarVertex.at(3, 1.0, 20)
        assert hyperbolic_distance(u, v, 1.0) == pytest.approx(4.0, abs=1e-12)

    def test_opposite_rays(self):
        u, v = PolarVertex.at(7, 1.0, 20), PolarVertex.at(3, 1.0 + math.pi, 20)
        assert hyperbolic_distance(u, v, 1.0) == pytest.approx(10.0, rel=1e-12)

    def test_origin(self):
        u, v = PolarVertex.at(5.5, 2.0, 20), PolarVertex.at(0.0, 0.3, 20)
        assert hyperbolic_distance(u, v, 0.8) == pytest.approx(5.5, rel=1e-12)

    def test_self_distance(self):
        u = PolarVertex.at(5.5, 2.0, 20)
        assert hyperbolic_distance(u, u, 1.0) == 0.0

    @pytest.mark.parametrize("r_u,r_v,theta,zeta", [
        (7, 3, 0.3, 1.0), (20, 19, 1e-6, 1.0), (45, 40, 0.01, 1.0),
        (60, 60, 2.0, 1.0), (35, 12, 1e-9, 1.0), (29.9, 30.1, 1e-3, 1.0), (50, 50, 1e-20, 1.3),
    ])
    def test_matches_high_precision(self, r_u, r_v, theta, zeta):
        got = distance_from_polar(r_u, r_v, theta, zeta)
        assert np.isfinite(got)
        assert got == pytest.approx(_mp_distance(r_u, r_v, theta, zeta), rel=1e-10, abs=1e-10)

    def test_no_overflow_far_out(self):
        d = distance_from_polar(700.0, 700.0, math.pi, 1.0)
        assert d == pytest.approx(1400.0, rel=1e-12)

    def test_broadcasting(self):
        out = distance_from_polar(np.array([1.0, 2.0])[:, None], 3.0, np.array([0.1, 0.2, 0.3]), 1.0)
        assert out.shape == (2, 3)
        assert out[1, 2] == pytest.approx(distance_from_polar(2.0, 3.0, 0.3, 1.0))

    def test_metric_properties(self):
        rng = np.random.default_rng(5)
        r = rng.uniform(0, 20, (10_000, 3))
        th = rng.uniform(0, 2 * math.pi, (10_000, 3))

        def d(i, j):
            return distance_from_polar(r[:, i], r[:, j], relative_angle(th[:, i], th[:, j]), 1.0)

        assert np.array_equal(d(0, 1), d(1, 0))
        assert np.all(d(0, 1) >= 0)
        assert np.all(d(0, 2) <= d(0, 1) + d(1, 2) + 1e-9)

    @settings(max_examples=200, deadline=None)
    @given(st.floats(0, 40), st.floats(0, 40), st.floats(0, math.pi), st.floats(0.2, 2.0))
    def test_symmetric_and_bounded(self, a, b, th, zeta):
        d = distance_from_polar(a, b, th, zeta)
        assert d == distance_from_polar(b, a, th, zeta)
        assert abs(a - b) - 1e-9 <= d <= a + b + 1e-9


class TestApproximation:
    def test_critical_angle_examples(self):
        assert critical_angle(5.0, 5.0, 5.0, 1.0) == pytest.approx(math.sqrt(2))
        assert critical_angle(0, 0, 20, 1.0) == pytest.approx(math.sqrt(2 * math.exp(-40)), rel=1e-12)
        assert critical_angle(0, 0, 20, 1.0) == pytest.approx(2.915e-9, rel=1e-3)
        assert critical_angle(1.0, 3.0, 12, 0.7) == critical_angle(3.0, 1.0, 12, 0.7)

    def test_at_pi(self):
        assert distance_approx(2.0, 3.0, math.pi, 20, 1.0) == pytest.approx(35.0)

    def test_small_angle_matches_exact(self):
        radius, theta = 20.0, 2 * math.exp(-10.0)
        approx = distance_approx(0.0, 0.0, theta, radius, 1.0)
        exact = distance_from_polar(radius, radius, theta, 1.0)
        assert approx == pytest.approx(radius, abs=1e-3)
        assert abs(approx - exact) < 1e-3

    def test_rejects_small_angles(self):
        with pytest.raises(ApproximationDomainError):
            distance_approx(0, 0, 1e-10, 20, 1.0)

    def test_agreement_on_random_suite(self):
        rng = np.random.default_rng(11)
        radius, zeta, omega = 20.0, 1.0, 1.0
        tu = rng.uniform(0, radius / 2 - omega, 1000)
        tv = rng.uniform(0, radius / 2 - omega, 1000)
        crit = critical_angle(tu, tv, radius, zeta)
        theta = np.minimum(math.pi, crit * 10 ** rng.uniform(2, 8, 1000))
        approx = distance_approx(tu, tv, theta, radius, zeta)
        exact = distance_from_polar(radius - tu, radius - tv, theta, zeta)
        assert np.max(np.abs(approx - exact)) <= 1e-2

    def test_error_shrinks_with_angle(self):
        rng = np.random.default_rng(3)
        radius, zeta = 20.0, 1.0
        tu = rng.uniform(0, 9, 500)
        tv = rng.uniform(0, 9, 500)
        crit = critical_angle(tu, tv, radius, zeta)

        def err(k):
            theta = k * crit
            return np.median(np.abs(distance_approx(tu, tv, theta, radius, zeta)
                                    - distance_from_polar(radius - tu, radius - tv, theta, zeta)))

        assert err(100.0) > err(1e4)


class TestWindow:
    def test_collapses_without_eps(self):
        lo, hi = disc_angle_window(2.0, 3.0, 30.0, 1.0, delta=0.0, eps=0.0)
        assert lo == hi == pytest.approx(2 * math.exp(0.5 * (5.0 - 30.0)))

    def test_increasing_in_type(self):
        his = [disc_angle_window(t, 1.0, 30.0, 1.0)[1] for t in np.linspace(0, 15, 20)]
        assert np.all(np.diff(his) > 0)

    def test_unavailable(self):
        with pytest.raises(WindowUnavailable):
            disc_angle_window(6.0, 5.0, 20.0, 1.0)
        with pytest.raises(InvalidParameters):
            disc_angle_window(1.0, 1.0, 20.0, 1.0, delta=1.0)

    def test_soundness(self):
        rng = np.random.default_rng(2)
        radius, zeta, eps = 20.0, 1.0, 0.1
        checked = 0
        while checked < 10_000:
            tu, tv = rng.uniform(0, 10, 2)
            if tu + tv >= radius - 10.0:
                continue
            lo, hi = disc_angle_window(tu, tv, radius, zeta, 0.0, eps)
            theta = rng.uniform(0, min(math.pi, 3 * hi))
            d = distance_from_polar(radius - tu, radius - tv, theta, zeta)
            if theta < lo:
                assert d <= radius
            if theta > hi:
                assert d >= radius
            checked += 1
