"""Limit constants and clustering limits of the hyperbolic random graph.

Two independent routes evaluate the double integral

    G(c1, c2) = int_0^inf int_0^inf  f(z1) f(z2) / ((c1 z1 + c2 z2)^beta + 1)  dz1 dz2,
    f(z) = 1 / (z^beta + 1):

* :func:`g_integral` runs nested adaptive quadrature (QUADPACK through
  scipy) after mapping each half-line onto [0, 1).  It is accurate but slow
  and serves as the reference.
* :class:`GTable` applies the trapezoid rule in s = ln z, which converges
  geometrically for this analytic integrand, on a whole grid of
  (ln c1, ln c2) at once in the compiled core, and interpolates with a
  quintic spline.  The clustering limits use the table.

The clustering limit of the subgraph on types below t is

    L(t) = 6 / (pi C_beta)^2 * E[ G(e^{zeta (t_w - t_v)/2}, e^{zeta (t_w - t_u)/2}) ],

where t_u, t_v follow an exponential law of rate alpha - zeta/2 and t_w one
of rate alpha - zeta, all truncated to [0, t).  The expectation is a
tensor Gauss-Legendre rule in the probability variables, with panels
refined geometrically toward the upper end to absorb the logarithmic
blow-up of the inverse CDF when t is infinite.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy import integrate
from scipy.interpolate import RectBivariateSpline
from scipy.special import gammaln

from . import _backend
from .errors import InvalidParameters, OutOfDomain, QuadratureFailure
from .hypgeom import ModelParams
from .sampler import default_omega


@dataclass(frozen=True)
class QuadConfig:
    """Tolerances for the numerical integrals.

    ``rel_tol``/``abs_tol`` govern the one- and two-dimensional integrals,
    ``outer_rel_tol`` the expectation over types inside the limits.
    ``map_infinite`` switches the z -> u/(1-u) compactification on.
    """

    rel_tol: float = 1e-6
    abs_tol: float = 1e-12
    max_depth: int = 200
    map_infinite: bool = True
    outer_rel_tol: float = 1e-4

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0 and self.outer_rel_tol > 0):
            raise InvalidParameters("tolerances must be positive")
        if self.max_depth < 1:
            raise InvalidParameters("max_depth must be at least 1")


@dataclass(frozen=True)
class LimitValue:
    value: float
    err_estimate: float
    config: QuadConfig
    stats: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not self.err_estimate >= 0:
            raise ValueError("error estimate must be non-negative")

    def __float__(self) -> float:
        return self.value

    def as_dict(self) -> dict:
        return {"value": self.value, "err_estimate": self.err_estimate,
                "config": asdict(self.config), "stats": dict(self.stats)}


def c_beta(beta: float) -> float:
    """Constant of the asymptotic edge probability."""
    if not beta > 0:
        raise InvalidParameters("beta must be positive")
    if beta > 1:
        return 2.0 / (beta * math.sin(math.pi / beta))
    if beta == 1:
        return 2.0 / math.pi
    return math.exp(gammaln(0.5 * (1.0 - beta)) - gammaln(1.0 - 0.5 * beta)) / math.sqrt(math.pi)


def _quad(*args, **kw):
    # convergence trouble is reported through the error estimate instead
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        return integrate.quad(*args, **kw)


def _need_beta_gt1(beta):
    if not beta > 1:
        raise OutOfDomain(f"the integral converges only for beta > 1 (got beta={beta})")


def _check(res, cfg: QuadConfig, what: str, tol: Optional[float] = None):
    val, err = res[0], res[1]
    tol = cfg.rel_tol if tol is None else tol
    if not np.isfinite(val) or err > max(tol * abs(val), cfg.abs_tol):
        raise QuadratureFailure(f"{what}: error {err:.3g} exceeds tolerance", partial=(val, err))
    return val, err


def one_over_one_plus_pow_integral(beta: float, cfg: QuadConfig = QuadConfig()) -> LimitValue:
    """int_0^inf dz / (1 + z^beta); equals pi / (beta sin(pi / beta))."""
    _need_beta_gt1(beta)
    if cfg.map_infinite:
        # z = u/(1-u): integrand (1-u)^(beta-2) / ((1-u)^beta + u^beta); the
        # algebraic factor goes into the QAWS weight
        res = _quad(lambda u: 1.0 / ((1.0 - u) ** beta + u ** beta), 0.0, 1.0,
                             weight="alg", wvar=(0.0, beta - 2.0), epsabs=cfg.abs_tol,
                             epsrel=cfg.rel_tol * 0.1, limit=cfg.max_depth)
    else:
        res = _quad(lambda z: 1.0 / (1.0 + z ** beta), 0.0, np.inf,
                             epsabs=cfg.abs_tol, epsrel=cfg.rel_tol * 0.1, limit=cfg.max_depth)
    val, err = _check(res, cfg, "int dz/(1+z^beta)")
    return LimitValue(val, err, cfg, {"neval": res[2]["neval"] if len(res) > 2 else None})


def g_integral(c1: float, c2: float, beta: float, cfg: QuadConfig = QuadConfig()) -> LimitValue:
    """G(c1, c2) by nested adaptive quadrature."""
    _need_beta_gt1(beta)
    if not (c1 > 0 and c2 > 0):
        raise InvalidParameters("c1 and c2 must be positive")
    inner_tol = 0.1 * cfg.rel_tol
    worst = [0.0]
    calls = [0]

    if cfg.map_infinite:
        def inner(u1):
            # z1 = u1/(1-u1) is handled by the outer weight; here z2 = u/(1-u)
            a = c1 * u1 / (1.0 - u1) if u1 < 1.0 else np.inf
            if not np.isfinite(a):
                return 0.0

            def f(u):
                v = 1.0 - u
                return 1.0 / ((v ** beta + u ** beta) * ((a * v + c2 * u) ** beta + v ** beta))

            r = _quad(f, 0.0, 1.0, weight="alg", wvar=(0.0, 2.0 * beta - 2.0),
                               epsabs=0.1 * cfg.abs_tol, epsrel=inner_tol, limit=cfg.max_depth)
            worst[0] = max(worst[0], r[1])
            calls[0] += 1
            return r[0]

        res = _quad(lambda u: inner(u) / ((1.0 - u) ** beta + u ** beta), 0.0, 1.0,
                             weight="alg", wvar=(0.0, beta - 2.0), epsabs=cfg.abs_tol,
                             epsrel=inner_tol, limit=cfg.max_depth)
    else:
        def inner(z1):
            r = _quad(lambda z2: 1.0 / ((z2 ** beta + 1.0) * ((c1 * z1 + c2 * z2) ** beta + 1.0)),
                               0.0, np.inf, epsabs=0.1 * cfg.abs_tol, epsrel=inner_tol, limit=cfg.max_depth)
            worst[0] = max(worst[0], r[1])
            calls[0] += 1
            return r[0]

        res = _quad(lambda z1: inner(z1) / (z1 ** beta + 1.0), 0.0, np.inf,
                             epsabs=cfg.abs_tol, epsrel=inner_tol, limit=cfg.max_depth)
    # inner errors enter through a weight of total mass int f = (pi/2) C_beta
    err = res[1] + worst[0] * 0.5 * math.pi * c_beta(beta)
    val, _ = _check((res[0], err), cfg, "G(c1, c2)")
    return LimitValue(val, err, cfg, {"inner_calls": calls[0]})


# ---------------------------------------------------------------------------
# tabulated G

_TABLE_TOL = 1e-11
_TABLE_SPACING = 0.25
_X_CLAMP = 20.0
_X_CLAMP_FINITE = 40.0


def _trapezoid_nodes(beta: float, tol: float = _TABLE_TOL):
    """Node layout (s_lo, h, count) for the trapezoid rule in s = ln z."""
    # poles of 1/(z^beta + 1) sit at Im s = pi/beta; the rule converges like exp(-2 pi d / h)
    d = 0.9 * math.pi / beta
    h = min(0.25, 2.0 * math.pi * d / math.log(1.0 / tol))
    s_lo = math.log(tol)
    s_hi = math.log(1.0 / (tol * (beta - 1.0))) / (beta - 1.0)
    n = int(math.ceil((s_hi - s_lo) / h)) + 1
    n += n % 2 == 0  # odd count keeps both ends on the coarse sub-rule
    return s_lo, h, n


class GTable:
    """Quintic spline interpolant of G over ln c1, ln c2 in [-xmax, xmax].

    Arguments outside the grid are clamped to its edge; G is flat toward
    c -> 0 and decays like 1/c for large c, so the clamp error is of order
    e^{-xmax} in absolute terms.
    """

    def __init__(self, beta: float, xmax: float, spacing: float = _TABLE_SPACING,
                 backend: str | None = None):
        _need_beta_gt1(beta)
        m = max(4, int(math.ceil(xmax / spacing)))
        self.beta = beta
        self.spacing = spacing
        self.x = spacing * np.arange(-m, m + 1, dtype=np.float64)
        self.xmax = float(self.x[-1])
        s_lo, h, n = _trapezoid_nodes(beta)
        fine, coarse = _backend.get(backend).g_table(np.ascontiguousarray(self.x), float(beta), s_lo, h, n)
        self.values = fine
        # the rule converges geometrically, so halving h squares the relative error
        rel = np.abs(fine - coarse) / np.abs(fine)
        self.quad_err = float(np.max(rel * rel * np.abs(fine)))
        self.nodes = n
        self._spline = RectBivariateSpline(self.x, self.x, fine, kx=5, ky=5)
        # same data on the doubled spacing; the spline error scales like spacing^6
        self._half = RectBivariateSpline(self.x[::2], self.x[::2], fine[::2, ::2], kx=5, ky=5)

    def __call__(self, x1, x2, grid: bool = False, coarse: bool = False):
        sp = self._half if coarse else self._spline
        x1 = np.clip(x1, -self.xmax, self.xmax)
        x2 = np.clip(x2, -self.xmax, self.xmax)
        return sp(x1, x2, grid=grid)


@lru_cache(maxsize=16)
def g_table(beta: float, xmax: float) -> GTable:
    """Cached :class:`GTable`; ``xmax`` is rounded up to a whole grid unit."""
    return GTable(beta, xmax)


def g_value(c1: float, c2: float, beta: float, backend: str | None = None) -> float:
    """G(c1, c2) by the trapezoid rule in ln z (no interpolation)."""
    _need_beta_gt1(beta)
    if not (c1 > 0 and c2 > 0):
        raise InvalidParameters("c1 and c2 must be positive")
    s_lo, h, n = _trapezoid_nodes(beta)
    x = np.array([math.log(c1), math.log(c2)])
    fine, _ = _backend.get(backend).g_table(x, float(beta), s_lo, h, n)
    return float(fine[0, 1])


# ---------------------------------------------------------------------------
# expectation over types

def _panel_count(rate: float, t_max: float) -> int:
    """Panels so that each covers about ln 2 / |rate| of type, at most 40."""
    if math.isinf(t_max):
        return 40
    return max(4, min(40, int(math.ceil(abs(rate) * t_max / math.log(2.0))) + 4))


def _gauss_panels(k_max: int, order: int, toward_one: bool):
    """Gauss-Legendre nodes on [0, 1] with panels halving toward one end."""
    g, w = np.polynomial.legendre.leggauss(order)
    edges = np.concatenate([1.0 - 0.5 ** np.arange(0, k_max + 1), [1.0]])
    a, b = edges[:-1], edges[1:]
    s = (0.5 * (b - a)[:, None] * (g[None, :] + 1.0) + a[:, None]).ravel()
    ws = (0.5 * (b - a)[:, None] * w[None, :]).ravel()
    if not toward_one:
        s = 1.0 - s
    return s, ws


def truncated_exp_quantile(s, rate: float, t_max: float):
    """Quantile of density prop. to e^{-rate t} on [0, t_max) (t_max may be inf when rate > 0)."""
    s = np.asarray(s, dtype=float)
    if math.isinf(t_max):
        return -np.log1p(-s) / rate
    if rate == 0.0:
        return s * t_max
    return -np.log1p(s * np.expm1(-rate * t_max)) / rate


def _type_nodes(rate: float, t_max: float, order: int):
    # a decaying density piles its quantiles up near s = 1, a growing one near s = 0
    s, w = _gauss_panels(_panel_count(rate, t_max), order, toward_one=rate >= 0)
    return truncated_exp_quantile(s, rate, t_max), w


def _expected_g(table: GTable, zeta: float, l1: float, l2: float, t_max: float,
                order: int, coarse: bool = False) -> float:
    tu, wu = _type_nodes(l1, t_max, order)
    tw, ww = _type_nodes(l2, t_max, order)
    # x = zeta/2 (t_w - t_v) must be ascending for grid evaluation
    idx = np.argsort(-tu, kind="stable")
    tu, wu = tu[idx], wu[idx]
    acc = 0.0
    for t3, w3 in zip(tw, ww):
        x = 0.5 * zeta * (t3 - tu)
        vals = table(x, x, grid=True, coarse=coarse)
        acc += w3 * float(wu @ vals @ wu)
    return acc


def _limit_expectation(t_max: float, beta: float, zeta: float, alpha: float, cfg: QuadConfig):
    l1 = alpha - 0.5 * zeta
    l2 = alpha - zeta
    if math.isinf(t_max):
        xmax = _X_CLAMP
    else:
        xmax = min(_X_CLAMP_FINITE, 0.5 * zeta * t_max + 1.0)
    table = g_table(beta, float(math.ceil(xmax)))
    order = 6
    prev = _expected_g(table, zeta, l1, l2, t_max, order)
    rule_err = math.inf
    while order < 16:
        order += 2
        cur = _expected_g(table, zeta, l1, l2, t_max, order)
        rule_err = abs(cur - prev)
        prev = cur
        if rule_err <= 0.1 * cfg.outer_rel_tol * abs(cur):
            break
    interp_err = abs(prev - _expected_g(table, zeta, l1, l2, t_max, order, coarse=True)) / 63.0
    err = rule_err + interp_err + table.quad_err
    stats = {"outer_order": order,
             "panels": [_panel_count(l1, t_max) + 1, _panel_count(l2, t_max) + 1],
             "table_points": int(len(table.x)), "table_spacing": table.spacing,
             "trapezoid_nodes": table.nodes, "table_quad_err": table.quad_err,
             "rule_err": rule_err, "interp_err": interp_err}
    if err > cfg.outer_rel_tol * abs(prev):
        raise QuadratureFailure(f"expectation of G: error {err:.3g} above tolerance", partial=(prev, err))
    return prev, err, stats


def _check_regime(beta, zeta, alpha):
    if not (zeta > 0 and alpha > 0):
        raise InvalidParameters("zeta and alpha must be positive")
    if not 0 < zeta / alpha < 2:
        raise OutOfDomain("requires 0 < zeta/alpha < 2")
    _need_beta_gt1(beta)


def limit_L_restricted(t: float, beta: float, zeta: float, alpha: float,
                       cfg: QuadConfig = QuadConfig()) -> LimitValue:
    """Limit of the global clustering of the subgraph on vertices of type below t."""
    _check_regime(beta, zeta, alpha)
    if not t > 0:
        raise InvalidParameters("type cap t must be positive")
    e, err, stats = _limit_expectation(float(t), beta, zeta, alpha, cfg)
    k = 6.0 / (math.pi * c_beta(beta)) ** 2
    return LimitValue(k * e, k * err, cfg, stats)


def limit_L_infinity(beta: float, zeta: float, alpha: float,
                     cfg: QuadConfig = QuadConfig()) -> LimitValue:
    """Limit of the global clustering coefficient when zeta/alpha < 1 and beta > 1."""
    _check_regime(beta, zeta, alpha)
    if not zeta < alpha:
        raise OutOfDomain("the limit is positive only for zeta/alpha < 1")
    e, err, stats = _limit_expectation(math.inf, beta, zeta, alpha, cfg)
    k = 6.0 / (math.pi * c_beta(beta)) ** 2
    return LimitValue(k * e, k * err, cfg, stats)


def infinity_prefactor(beta: float, zeta: float, alpha: float) -> float:
    """(3/2) (2 alpha - zeta)^2 (alpha - zeta) / (pi C_beta)^2."""
    return 1.5 * (2.0 * alpha - zeta) ** 2 * (alpha - zeta) / (math.pi * c_beta(beta)) ** 2


def _exp_integral(rate: float, t_max: float) -> float:
    if math.isinf(t_max):
        return 1.0 / rate
    if rate == 0.0:
        return t_max
    return -math.expm1(-rate * t_max) / rate


def den_closed_form(t: float, zeta: float, alpha: float) -> float:
    """int over [0, t)^3 of e^{zeta/2 (t_u + t_v) + zeta t_w - alpha (t_u + t_v + t_w)}."""
    return _exp_integral(alpha - 0.5 * zeta, t) ** 2 * _exp_integral(alpha - zeta, t)


# ---------------------------------------------------------------------------
# asymptotic edge probability and growth orders

def edge_prob_asymptotic(t_u: float, t_v: float, params: ModelParams,
                         omega: Optional[float] = None) -> float:
    """Leading-order probability that vertices of types t_u, t_v are adjacent."""
    omega = default_omega(params.n) if omega is None else omega
    if not t_u + t_v < params.radius - 2.0 * omega:
        raise OutOfDomain("types too large: need t_u + t_v < R - 2 omega")
    a = (params.n / params.nu) * math.exp(-0.5 * params.zeta * (t_u + t_v))
    cb = c_beta(params.beta)
    if params.beta > 1:
        p = cb / a
    elif params.beta == 1:
        p = cb * math.log(a) / a
    else:
        p = cb / a ** params.beta
    return min(1.0, max(0.0, p))


def _frac(x: float) -> Fraction:
    return Fraction(x).limit_denominator(10**6)


@dataclass(frozen=True)
class GrowthOrder:
    """E(Lambda-hat) grows like N^n_power R^r_power exp(omega_rate * omega(N)).

    ``triangles_comparable`` is True when E(T-hat) is of the same order,
    False when it is of smaller order.
    """

    n_power: Fraction
    r_power: int
    omega_rate: Optional[Fraction]
    triangles_comparable: bool

    def as_dict(self) -> dict:
        return {
            "n_power": str(self.n_power),
            "r_power": self.r_power,
            "omega_rate": None if self.omega_rate is None else str(self.omega_rate),
            "triangles_comparable": self.triangles_comparable,
        }

    def log_value(self, n: float, radius: float, omega: float) -> float:
        out = float(self.n_power) * math.log(n) + self.r_power * math.log(radius)
        if self.omega_rate is not None:
            out += float(self.omega_rate) * omega
        return out


def lambda_T_order(beta: float, zeta: float, alpha: float) -> GrowthOrder:
    if not (beta > 0 and zeta > 0 and alpha > 0):
        raise InvalidParameters("beta, zeta and alpha must be positive")
    z, a, b = _frac(zeta), _frac(alpha), _frac(beta)
    ratio = z / a
    if not 0 < ratio < 2:
        raise OutOfDomain("requires 0 < zeta/alpha < 2")
    if b > 1 or b == 1:
        r_pow = 0 if b > 1 else 2
        if ratio < 1:
            return GrowthOrder(Fraction(1), r_pow, None, b > 1)
        if ratio == 1:
            return GrowthOrder(Fraction(1), r_pow + 1, None, False)
        return GrowthOrder(2 - a / z, r_pow, -(z - a), False)
    bz = b * ratio
    if bz < 1:
        return GrowthOrder(3 - 2 * b, 0, None, False)
    if bz == 1:
        return GrowthOrder(3 - 2 * b, 1, None, False)
    return GrowthOrder(3 - b - a / z, 0, a - b * z, False)


def degree_tail_exponent(zeta: float, alpha: float) -> float:
    """Power-law exponent 2 alpha / zeta + 1 of the degree distribution."""
    return 2.0 * alpha / zeta + 1.0


def with_tolerance(cfg: QuadConfig, **kw) -> QuadConfig:
    return replace(cfg, **kw)
