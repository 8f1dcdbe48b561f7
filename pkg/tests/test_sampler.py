import math

import numpy as np
import pytest
from scipy import integrate, stats

from hypclust.hypgeom import ModelParams
from hypclust.sampler import (default_omega, max_type_bound, radius_cdf, read_vertices_csv,
                              sample_radius, sample_vertex, sample_vertex_set, type_cdf,
                              type_pdf, write_vertices_csv)


def test_ks_radius_distribution():
    p = ModelParams(zeta=1.0, alpha=0.8, beta=2.0, nu=1.0, n=1_000_000)
    vs = sample_vertex_set(p, 42)
    res = stats.kstest(vs.r, lambda r: radius_cdf(r, p.alpha, p.radius))
    assert res.pvalue > 1e-3


def test_angles_uniform():
    p = ModelParams(zeta=1.0, alpha=1.0, beta=2.0, nu=1.0, n=100_000)
    vs = sample_vertex_set(p, 3)
    assert vs.theta.min() > 0 and vs.theta.max() <= 2 * math.pi
    assert stats.kstest(vs.theta / (2 * math.pi), "uniform").pvalue > 1e-3


def test_endpoints():
    assert sample_radius(0.0, 1.0, 10.0) == 0.0
    assert sample_radius(1.0, 1.0, 10.0) == 10.0
    assert radius_cdf(sample_radius(0.3, 0.7, 12.0), 0.7, 12.0) == pytest.approx(0.3, rel=1e-12)


@pytest.mark.parametrize("alpha,radius", [(1.0, 20.0), (2.0, 400.0), (0.5, 2000.0)])
def test_inverse_cdf_round_trip(alpha, radius):
    u = np.linspace(1e-6, 1 - 1e-6, 101)
    r = sample_radius(u, alpha, radius)
    assert np.all(np.isfinite(r)) and np.all(np.diff(r) > 0)
    # compare in type space, where the tail mass lives
    t = radius - r
    assert np.allclose(type_cdf(t, alpha, radius), 1 - u, rtol=1e-8, atol=1e-12)


def test_type_pdf_normalised():
    val, _ = integrate.quad(type_pdf, 0, 20, args=(1.3, 20.0))
    assert val == pytest.approx(1.0, rel=1e-9)
    assert type_pdf(-0.1, 1.0, 5.0) == 0.0
    assert type_pdf(2.0, 1.0, 50.0, approximate=True) == pytest.approx(math.exp(-2.0))
    assert type_pdf(2.0, 1.0, 50.0) == pytest.approx(math.exp(-2.0), rel=1e-12)


def test_vertex_reproducible_and_indexed():
    p = ModelParams(zeta=1.0, alpha=1.0, beta=2.0, nu=1.0, n=500)
    a, b = sample_vertex_set(p, 9), sample_vertex_set(p, 9)
    assert a == b
    assert sample_vertex_set(p, 10) != a
    v = sample_vertex(p, 9, 123)
    assert v.r == a.r[123] and v.theta == a.theta[123]
    # growing N keeps the first vertices
    big = sample_vertex_set(p.with_n(1000), 9)
    assert np.array_equal(big.theta[:500], a.theta)


def test_omega_and_bound():
    assert default_omega(10) == 1.0
    assert default_omega(10**100) == pytest.approx(math.log(math.log(math.log(1e100))))
    p = ModelParams(zeta=1.0, alpha=1.0, beta=2.0, nu=1.0, n=10_000)
    assert max_type_bound(p, 1.0) == pytest.approx(p.radius / 2 + 1)


def test_csv_round_trip(tmp_path):
    p = ModelParams(zeta=1.0, alpha=1.5, beta=2.0, nu=1.0, n=50)
    vs = sample_vertex_set(p, 1)
    path = tmp_path / "v.csv"
    write_vertices_csv(vs, path)
    r, th, t = read_vertices_csv(path)
    assert np.array_equal(r, vs.r) and np.array_equal(th, vs.theta)
    assert np.allclose(t, vs.types)
    with pytest.raises(FileNotFoundError):
        read_vertices_csv(tmp_path / "missing.csv")
