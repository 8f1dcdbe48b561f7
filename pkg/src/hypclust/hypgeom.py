"""Geometry of the disc D_R in the native representation of the hyperbolic plane.

A point is stored by polar coordinates (r, theta); its hyperbolic distance
from the origin is r.  Curvature is -zeta**2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ApproximationDomainError, InvalidParameters, WindowUnavailable

TWO_PI = 2.0 * math.pi
LOG2 = math.log(2.0)

# above this value of zeta*r the cosh/sinh products are combined in log space
LOG_DOMAIN_THRESHOLD = 30.0
DEFAULT_C0 = 10.0


def radius_from_count(n, nu, zeta):
    """Disc radius R with n = nu * exp(zeta R / 2)."""
    if not (nu > 0 and zeta > 0):
        raise InvalidParameters(f"nu and zeta must be positive (nu={nu}, zeta={zeta})")
    if n < 1:
        raise InvalidParameters(f"n must be >= 1, got {n}")
    if n < nu:
        raise InvalidParameters(f"n={n} < nu={nu} gives a negative radius")
    return (2.0 / zeta) * math.log(n / nu)


@dataclass(frozen=True)
class ModelParams:
    """Parameters of G(N; zeta, alpha, beta, nu); the radius is derived from them."""

    zeta: float
    alpha: float
    beta: float
    nu: float
    n: int
    radius: float = field(init=False)

    def __post_init__(self):
        for name in ("zeta", "alpha", "beta", "nu"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise InvalidParameters(f"{name} must be a positive finite number, got {value!r}")
        if int(self.n) != self.n or self.n < 1:
            raise InvalidParameters(f"n must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "radius", radius_from_count(self.n, self.nu, self.zeta))

    @property
    def ratio(self) -> float:
        """zeta / alpha."""
        return self.zeta / self.alpha

    def with_n(self, n: int) -> "ModelParams":
        return ModelParams(self.zeta, self.alpha, self.beta, self.nu, n)

    def as_dict(self) -> dict:
        return {
            "zeta": self.zeta,
            "alpha": self.alpha,
            "beta": self.beta,
            "nu": self.nu,
            "n": self.n,
            "radius": self.radius,
        }


@dataclass(frozen=True)
class PolarVertex:
    r: float
    theta: float
    t: float

    @classmethod
    def at(cls, r: float, theta: float, radius: float) -> "PolarVertex":
        if not (0.0 <= r <= radius):
            raise InvalidParameters(f"radius {r} outside [0, {radius}]")
        if not (0.0 < theta <= TWO_PI):
            raise InvalidParameters(f"angle {theta} outside (0, 2pi]")
        return cls(float(r), float(theta), float(radius - r))

    @classmethod
    def of_type(cls, t: float, theta: float, radius: float) -> "PolarVertex":
        return cls.at(radius - t, theta, radius)


def relative_angle(theta_u, theta_v):
    """Minimal angle between two directions, in [0, pi]."""
    diff = np.abs(np.asarray(theta_u, dtype=float) - np.asarray(theta_v, dtype=float))
    diff = np.mod(diff, TWO_PI)
    out = np.minimum(diff, TWO_PI - diff)
    return float(out) if out.ndim == 0 else out


def _log_sinh(x):
    # x > 0
    return x + np.log1p(-np.exp(-2.0 * x)) - LOG2


def distance_from_polar(r_u, r_v, theta, zeta):
    """Hyperbolic distance for radii r_u, r_v at relative angle ``theta`` (vectorised).

    Uses cosh(zeta d) = cosh(zeta (r_u - r_v)) + 2 sinh(zeta r_u) sinh(zeta r_v) sin^2(theta/2),
    which does not cancel for small angles, and works in log space once
    zeta * r exceeds the overflow-safe threshold.
    """
    r_u = np.asarray(r_u, dtype=float)
    r_v = np.asarray(r_v, dtype=float)
    theta = np.asarray(theta, dtype=float)
    a, b, theta = np.broadcast_arrays(zeta * r_u, zeta * r_v, theta)
    # fixed operand order keeps d(u, v) == d(v, u) bit for bit
    a, b = np.minimum(a, b), np.maximum(a, b)
    s = np.abs(np.sin(0.5 * theta))
    half_gap = 0.5 * np.abs(a - b)

    out = np.empty(a.shape, dtype=float)
    big = np.maximum(a, b) > LOG_DOMAIN_THRESHOLD
    small = ~big
    if np.any(small):
        # y = cosh(zeta d) - 1
        y = 2.0 * np.sinh(half_gap[small]) ** 2 + 2.0 * np.sinh(a[small]) * np.sinh(b[small]) * s[small] ** 2
        out[small] = np.log1p(y + np.sqrt(y * (y + 2.0)))
    if np.any(big):
        hg, ab, bb, sb = half_gap[big], a[big], b[big], s[big]
        with np.errstate(divide="ignore"):
            l1 = np.where(hg > 0, LOG2 + 2.0 * _log_sinh(np.where(hg > 0, hg, 1.0)), -np.inf)
            pos = (ab > 0) & (bb > 0) & (sb > 0)
            l2 = np.where(
                pos,
                LOG2
                + _log_sinh(np.where(pos, ab, 1.0))
                + _log_sinh(np.where(pos, bb, 1.0))
                + 2.0 * np.log(np.where(pos, sb, 1.0)),
                -np.inf,
            )
        ly = np.logaddexp(l1, l2)
        res = np.zeros_like(ly)
        huge = ly > 30.0
        res[huge] = LOG2 + ly[huge] + np.exp(-ly[huge])
        mid = np.isfinite(ly) & ~huge
        y = np.exp(ly[mid])
        res[mid] = np.log1p(y + np.sqrt(y * (y + 2.0)))
        out[big] = res
    out /= zeta
    return float(out) if out.ndim == 0 else out


def hyperbolic_distance(u: PolarVertex, v: PolarVertex, zeta: float) -> float:
    """Exact distance between two points of the disc (hyperbolic law of cosines)."""
    return distance_from_polar(u.r, v.r, relative_angle(u.theta, v.theta), zeta)


def critical_angle(t_u, t_v, radius, zeta):
    """Angle below which the logarithmic distance formula stops being accurate."""
    out = np.sqrt(np.exp(-2.0 * zeta * (radius - np.asarray(t_u, float)))
                  + np.exp(-2.0 * zeta * (radius - np.asarray(t_v, float))))
    return float(out) if out.ndim == 0 else out


def distance_approx(t_u, t_v, theta, radius, zeta):
    """Leading-order distance 2R - (t_u + t_v) + (2/zeta) ln sin(theta/2).

    The error is of order (critical_angle / theta)**2, so the angle has to be
    well above the critical angle; at or below it an error is raised.
    """
    theta = np.asarray(theta, dtype=float)
    crit = critical_angle(t_u, t_v, radius, zeta)
    if np.any(theta <= crit):
        raise ApproximationDomainError("relative angle must exceed the critical angle")
    out = 2.0 * radius - (np.asarray(t_u, float) + np.asarray(t_v, float)) + (2.0 / zeta) * np.log(np.sin(0.5 * theta))
    return float(out) if np.ndim(out) == 0 else out


def disc_angle_window(t_u, t_v, radius, zeta, delta=0.0, eps=0.2, c0=DEFAULT_C0):
    """Angular thresholds (lo, hi) around the distance (1 + delta) R.

    Below ``lo`` a pair is (asymptotically) closer than (1 + delta) R, above
    ``hi`` it is farther.  Only valid for t_u + t_v < (1 - |delta|) R - c0.
    """
    if not -1.0 < delta < 1.0:
        raise InvalidParameters(f"delta must lie in (-1, 1), got {delta}")
    if eps < 0:
        raise InvalidParameters(f"eps must be non-negative, got {eps}")
    if not (t_u + t_v < (1.0 - abs(delta)) * radius - c0):
        raise WindowUnavailable(
            f"t_u + t_v = {t_u + t_v:.6g} is not below (1-|delta|)R - c0 = {(1.0 - abs(delta)) * radius - c0:.6g}"
        )
    base = 2.0 * math.exp(0.5 * zeta * (t_u + t_v - (1.0 - delta) * radius))
    return (1.0 - eps) * base, (1.0 + eps) * base
