"""Disc-model and binomial-model graphs on a sampled vertex set."""

from __future__ import annotations

import math

import numpy as np
from scipy.special import expit

from . import _backend, rng
from .errors import BuilderCapExceeded, InvalidParameters
from .graph import Graph
from .hypgeom import DEFAULT_C0, ModelParams, PolarVertex, distance_from_polar, hyperbolic_distance, relative_angle
from .sampler import VertexSet

BINOMIAL_CAP = 50_000
PRUNE_EPS = 0.2
# coin values below this are always checked exactly; above it, pairs whose
# scaled cosh already exceeds the matching bound are rejected without pow()
_UCUT = 1e-3


def _precompute(vs: VertexSet):
    zeta = vs.params.zeta
    radius = vs.params.radius
    r = np.ascontiguousarray(vs.r, dtype=np.float64)
    P = np.exp(zeta * (r - 0.5 * radius))
    Q = np.exp(-zeta * (r + 0.5 * radius))
    S = 0.5 * (P - Q)
    hs = np.sin(0.5 * vs.theta)
    hc = np.cos(0.5 * vs.theta)
    return P, Q, S, np.ascontiguousarray(hs), np.ascontiguousarray(hc)


def _disc_threshold(zeta: float, radius: float, delta: float) -> float:
    # cosh(zeta (1 + delta) R) * exp(-zeta R)
    return 0.5 * (math.exp(zeta * delta * radius) + math.exp(-zeta * (2.0 + delta) * radius))


def _graph(vs: VertexSet, i, j, model: str, edge_seed=None) -> Graph:
    return Graph.from_pairs(
        vs.params.n, i, j, model=model, params=vs.params, seed=vs.seed,
        edge_seed=edge_seed, types=vs.types, radius=vs.params.radius,
    )


def _check_delta(delta):
    if not -1.0 < delta < 1.0:
        raise InvalidParameters(f"delta must lie in (-1, 1), got {delta}")


def build_disc_naive(vs: VertexSet, delta: float = 0.0, backend: str | None = None) -> Graph:
    """Reference O(N^2) builder: edge iff d(u, v) <= (1 + delta) R."""
    _check_delta(delta)
    k = _backend.get(backend)
    thresh = _disc_threshold(vs.params.zeta, vs.params.radius, delta)
    i, j = k.disc_pairs_naive(*_precompute(vs), thresh)
    return _graph(vs, i, j, "disc")


def _angle_bands(vs: VertexSet, band_width: float):
    types = vs.types
    band = np.floor(np.maximum(types, 0.0) / band_width).astype(np.int64)
    nb = int(band.max()) + 1 if len(band) else 1
    members = np.lexsort((vs.theta, band)).astype(np.int64)
    band_ptr = np.zeros(nb + 1, dtype=np.int64)
    np.cumsum(np.bincount(band, minlength=nb), out=band_ptr[1:])
    band_theta = np.ascontiguousarray(vs.theta[members])
    tmax = np.full(nb, -np.inf)
    tmin = np.full(nb, np.inf)
    np.maximum.at(tmax, band, types)
    np.minimum.at(tmin, band, types)
    empty = ~np.isfinite(tmax)
    tmax[empty] = 0.0
    tmin[empty] = 0.0
    radius = vs.params.radius
    return band_ptr, members, band_theta, radius - tmax, radius - tmin, tmax


def build_disc_pruned(vs: VertexSet, delta: float = 0.0, eps: float = PRUNE_EPS,
                      c0: float = DEFAULT_C0, band_width: float = 1.0,
                      backend: str | None = None) -> Graph:
    """Same edge set as :func:`build_disc_naive`, scanning only angular windows.

    Vertices are grouped into type bands and sorted by angle.  For a vertex u
    and a band, candidates are taken from an angular window at least as wide
    as both the asymptotic window 2(1+eps) e^{zeta/2 (t_u + t_v - (1-delta) R)}
    and the exact reachable angle at the band's extreme radii; every candidate
    is re-checked with the exact distance.  Bands with t_u + t_max outside
    the window's validity range are scanned in full.
    """
    _check_delta(delta)
    if band_width <= 0:
        raise InvalidParameters("band_width must be positive")
    k = _backend.get(backend)
    p = vs.params
    thresh = _disc_threshold(p.zeta, p.radius, delta)
    band_ptr, members, band_theta, rmin, rmax, tmax = _angle_bands(vs, band_width)
    i, j = k.disc_pairs_pruned(
        *_precompute(vs),
        np.ascontiguousarray(vs.r, dtype=np.float64),
        np.ascontiguousarray(vs.theta, dtype=np.float64),
        np.ascontiguousarray(vs.types, dtype=np.float64),
        p.zeta, p.radius, float(delta), thresh, float(eps), float(c0),
        band_ptr, members, band_theta,
        np.ascontiguousarray(rmin), np.ascontiguousarray(rmax), np.ascontiguousarray(tmax),
    )
    return _graph(vs, i, j, "disc")


def build_binomial(vs: VertexSet, edge_seed: int, force_quadratic: bool = False,
                   cap: int = BINOMIAL_CAP, backend: str | None = None) -> Graph:
    """Each pair is an edge with probability 1 / (exp(beta zeta/2 (d - R)) + 1).

    The coin of pair (i, j) is a pure function of (edge_seed, i, j).  All
    N(N-1)/2 pairs are visited, so N above ``cap`` needs ``force_quadratic``.
    """
    p = vs.params
    if p.n > cap and not force_quadratic:
        raise BuilderCapExceeded(
            f"binomial builder is quadratic; N={p.n} exceeds the cap {cap} (use force_quadratic)"
        )
    k = _backend.get(backend)
    e2 = math.exp(-2.0 * p.zeta * p.radius)
    keys = rng.row_keys(edge_seed, rng.TAG_EDGE, np.arange(p.n, dtype=np.uint64))
    zcap = (1.0 / _UCUT - 1.0) ** (2.0 / p.beta)
    i, j = k.binomial_pairs(*_precompute(vs), e2, 0.5 * p.beta, np.ascontiguousarray(keys),
                            _UCUT, zcap)
    return _graph(vs, i, j, "binomial", edge_seed=int(edge_seed))


def build(vs: VertexSet, model: str, edge_seed: int | None = None, **kw) -> Graph:
    if model == "disc":
        return build_disc_pruned(vs, **kw)
    if model == "binomial":
        return build_binomial(vs, vs.seed if edge_seed is None else edge_seed, **kw)
    raise InvalidParameters(f"unknown model {model!r}")


def probability_from_distance(d, params: ModelParams):
    """Logistic edge probability in the excess distance d - R."""
    out = expit(-params.beta * 0.5 * params.zeta * (np.asarray(d, dtype=float) - params.radius))
    return float(out) if np.ndim(out) == 0 else out


def connection_probability(u: PolarVertex, v: PolarVertex, params: ModelParams) -> float:
    return probability_from_distance(hyperbolic_distance(u, v, params.zeta), params)


def connection_probability_angle_form(t_u, t_v, theta, params: ModelParams, scale: float = 1.0):
    """1 / (C A^beta sin^beta(theta/2) + 1) with A = (N/nu) e^{-zeta/2 (t_u + t_v)}."""
    a = pair_scale(t_u, t_v, params)
    x = scale * (a * np.sin(0.5 * np.asarray(theta, dtype=float))) ** params.beta
    out = 1.0 / (x + 1.0)
    return float(out) if np.ndim(out) == 0 else out


def pair_scale(t_u, t_v, params: ModelParams):
    """A_{u,v} = (N/nu) exp(-zeta/2 (t_u + t_v))."""
    out = (params.n / params.nu) * np.exp(-0.5 * params.zeta * (np.asarray(t_u, float) + np.asarray(t_v, float)))
    return float(out) if np.ndim(out) == 0 else out


def sample_pair_adjacency(t_u: float, t_v: float, params: ModelParams, n_pairs: int, seed: int):
    """Independent binomial-model pairs with fixed types and uniform relative angle.

    Returns a boolean array, one adjacency indicator per pair.
    """
    k = np.arange(n_pairs, dtype=np.uint64)
    keys = rng.row_keys(seed, rng.TAG_PAIR_TEST, k)
    theta = np.pi * rng.to_unit(rng.stream_bits(keys, 0))
    coin = rng.to_unit(rng.stream_bits(keys, 1))
    d = distance_from_polar(params.radius - t_u, params.radius - t_v, theta, params.zeta)
    return coin < probability_from_distance(d, params)


__all__ = [
    "build_disc_naive",
    "build_disc_pruned",
    "build_binomial",
    "build",
    "connection_probability",
    "connection_probability_angle_form",
    "probability_from_distance",
    "pair_scale",
    "relative_angle",
    "sample_pair_adjacency",
]
