"""Seeded sampling of the vertex set on D_R and the type densities."""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass

import numpy as np

from . import rng
from .hypgeom import LOG2, TWO_PI, ModelParams, PolarVertex


def default_omega(n: int) -> float:
    """Typical-vertex cutoff omega(N) = max(1, ln ln ln N)."""
    if n <= math.e ** math.e:
        return 1.0
    return max(1.0, math.log(math.log(math.log(n))))


def _acosh1p(y):
    return np.log1p(y + np.sqrt(y * (y + 2.0)))


def sample_radius(u01, alpha, radius):
    """Inverse CDF of the radial density alpha sinh(alpha r) / (cosh(alpha R) - 1).

    ``u01`` may be a scalar or an array of uniforms in [0, 1].
    """
    u = np.asarray(u01, dtype=float)
    half = 0.5 * alpha * radius
    if half < 300.0:
        # 1 + u (cosh aR - 1) = 1 + 2 u sinh^2(aR/2)
        y = 2.0 * u * np.sinh(half) ** 2
        r = _acosh1p(y) / alpha
    else:
        with np.errstate(divide="ignore"):
            ly = LOG2 + np.log(u) + 2.0 * (half + np.log1p(-np.exp(-2.0 * half)) - LOG2)
        r = np.where(
            ly > 30.0,
            LOG2 + ly + np.exp(-np.minimum(ly, 700.0)),
            _acosh1p(np.exp(np.minimum(ly, 30.0))),
        ) / alpha
    r = np.clip(r, 0.0, radius)
    r = np.where(u >= 1.0, radius, r)
    return float(r) if r.ndim == 0 else r


def radius_cdf(r, alpha, radius):
    """P(radius <= r) = sinh^2(alpha r / 2) / sinh^2(alpha R / 2)."""
    r = np.asarray(r, dtype=float)
    out = (np.sinh(0.5 * alpha * r) / np.sinh(0.5 * alpha * radius)) ** 2
    return float(out) if out.ndim == 0 else out


def type_pdf(t, alpha, radius, approximate=False):
    """Density of the type t = R - r; ``approximate`` gives alpha exp(-alpha t)."""
    t = np.asarray(t, dtype=float)
    if approximate:
        out = alpha * np.exp(-alpha * t)
    else:
        # alpha sinh(alpha (R - t)) / (cosh(alpha R) - 1), written without overflow
        out = alpha * np.exp(-alpha * t) * (-np.expm1(-2.0 * alpha * (radius - t))) / np.expm1(-alpha * radius) ** 2
        out = np.where((t < 0) | (t > radius), 0.0, out)
    return float(out) if out.ndim == 0 else out


def type_cdf(t, alpha, radius):
    """P(type <= t), exact."""
    return 1.0 - radius_cdf(radius - np.asarray(t, dtype=float), alpha, radius)


def max_type_bound(params: ModelParams, omega: float) -> float:
    """(zeta / 2 alpha) R + omega: a.a.s. no vertex has a larger type."""
    return params.zeta / (2.0 * params.alpha) * params.radius + omega


@dataclass(frozen=True, eq=False)
class VertexSet:
    params: ModelParams
    r: np.ndarray
    theta: np.ndarray
    seed: int

    def __post_init__(self):
        if len(self.r) != self.params.n or len(self.theta) != self.params.n:
            raise ValueError("vertex arrays must have length params.n")

    def __len__(self) -> int:
        return self.params.n

    @property
    def types(self) -> np.ndarray:
        return self.params.radius - self.r

    @property
    def vertices(self) -> list[PolarVertex]:
        t = self.types
        return [PolarVertex(float(a), float(b), float(c)) for a, b, c in zip(self.r, self.theta, t)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, VertexSet):
            return NotImplemented
        return (
            self.params == other.params
            and self.seed == other.seed
            and np.array_equal(self.r, other.r)
            and np.array_equal(self.theta, other.theta)
        )

    def permuted(self, perm) -> "VertexSet":
        """Relabel so that new vertex k is old vertex perm[k]."""
        perm = np.asarray(perm)
        return VertexSet(self.params, self.r[perm], self.theta[perm], self.seed)


def _draw(seed: int, index, alpha: float, radius: float):
    keys = rng.row_keys(seed, rng.TAG_VERTEX, index)
    u_r = rng.to_unit(rng.stream_bits(keys, 0))
    u_theta = rng.to_unit(rng.stream_bits(keys, 1))
    r = np.atleast_1d(sample_radius(u_r, alpha, radius))
    theta = TWO_PI * (1.0 - u_theta)  # (0, 2pi]
    return r, theta


def sample_vertex_set(params: ModelParams, seed: int) -> VertexSet:
    """N i.i.d. points; vertex i depends only on (seed, i)."""
    r, theta = _draw(seed, np.arange(params.n, dtype=np.uint64), params.alpha, params.radius)
    return VertexSet(params, r, theta, int(seed))


def sample_vertex(params: ModelParams, seed: int, index: int) -> PolarVertex:
    r, theta = _draw(seed, np.array([index], dtype=np.uint64), params.alpha, params.radius)
    return PolarVertex(float(r[0]), float(theta[0]), float(params.radius - r[0]))


def write_vertices_csv(vs: VertexSet, path) -> None:
    types = vs.types
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["index", "r", "theta", "type"])
        for i in range(len(vs)):
            w.writerow([i, f"{vs.r[i]:.17g}", f"{vs.theta[i]:.17g}", f"{types[i]:.17g}"])


def read_vertices_csv(path):
    """Return (r, theta, type) arrays ordered by the index column."""
    if not os.path.exists(path):
        raise FileNotFoundError(f"vertex file not found: {path}")
    data = np.genfromtxt(path, delimiter=",", names=True, dtype=float)
    data = np.atleast_1d(data)
    order = np.argsort(data["index"], kind="stable")
    return data["r"][order], data["theta"][order], data["type"][order]
