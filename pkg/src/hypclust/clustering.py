"""Triangle, path and clustering statistics, including the typical/atypical split."""

from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import _backend
from .graph import Graph

CONVENTIONS = ("exclude", "zero", "one")


def _mask(g: Graph, mask=None) -> np.ndarray:
    if mask is None:
        return np.ones(g.n, dtype=np.uint8)
    return np.ascontiguousarray(np.asarray(mask, dtype=bool).astype(np.uint8))


def triangles_per_vertex(g: Graph, mask=None, backend: str | None = None) -> np.ndarray:
    """Triangles through each vertex inside the subgraph induced by ``mask``."""
    k = _backend.get(backend)
    return k.triangles_per_vertex(
        np.ascontiguousarray(g.indptr, dtype=np.int64),
        np.ascontiguousarray(g.indices, dtype=np.int64),
        _mask(g, mask),
    )


def masked_degrees(g: Graph, mask) -> np.ndarray:
    """Degree of every vertex counting only neighbours in ``mask`` (0 outside it)."""
    m = np.asarray(mask, dtype=bool)
    owner = np.repeat(np.arange(g.n), g.degrees)
    keep = m[owner] & m[g.indices]
    return np.bincount(owner[keep], minlength=g.n).astype(np.int64)


def _pairs(deg) -> int:
    deg = np.asarray(deg, dtype=np.int64)
    return int(np.sum(deg * (deg - 1) // 2))


def count_paths2(g: Graph) -> int:
    """Number of paths of length two, sum over v of C(deg v, 2)."""
    return _pairs(g.degrees)


def count_triangles(g: Graph, backend: str | None = None) -> int:
    return int(triangles_per_vertex(g, backend=backend).sum() // 3)


def global_clustering(g: Graph, backend: str | None = None) -> Optional[float]:
    """3T / Lambda, or None when the graph has no path of length two."""
    lam = count_paths2(g)
    if lam == 0:
        return None
    return 3.0 * count_triangles(g, backend) / lam


def local_clustering(g: Graph, backend: str | None = None) -> np.ndarray:
    """Per-vertex clustering, NaN where the degree is below two."""
    tri = triangles_per_vertex(g, backend=backend).astype(float)
    deg = g.degrees.astype(float)
    pairs = 0.5 * deg * (deg - 1.0)
    out = np.full(g.n, np.nan)
    ok = deg >= 2
    out[ok] = tri[ok] / pairs[ok]
    return out


def local_clustering_mean(g: Graph, convention: str = "exclude",
                          backend: str | None = None) -> Optional[float]:
    """Average local clustering.

    Vertices of degree 0 or 1 are dropped (``exclude``), or counted as 0 or 1.
    Returns None when no vertex is left to average.
    """
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}")
    c = local_clustering(g, backend)
    if convention == "zero":
        c = np.nan_to_num(c, nan=0.0)
    elif convention == "one":
        c = np.nan_to_num(c, nan=1.0)
    else:
        c = c[~np.isnan(c)]
    if c.size == 0:
        return None
    return float(c.mean())


def _require_types(g: Graph):
    if g.types is None or g.radius is None:
        raise ValueError("graph carries no vertex types")


def typical_mask(g: Graph, omega: float) -> np.ndarray:
    """Vertices with type at most R/2 - omega."""
    _require_types(g)
    return g.types <= 0.5 * g.radius - omega


@dataclass(frozen=True)
class TypicalSplit:
    """Triangles and 2-paths among typical vertices (hat) and the rest (tilde)."""

    t_hat: int
    lambda_hat: int
    t_tilde: int
    lambda_tilde: int
    n_typical: int


def typical_split(g: Graph, omega: float, backend: str | None = None) -> TypicalSplit:
    m = typical_mask(g, omega)
    t_all = count_triangles(g, backend)
    lam_all = count_paths2(g)
    t_hat = int(triangles_per_vertex(g, m, backend).sum() // 3)
    lam_hat = _pairs(masked_degrees(g, m)[m])
    return TypicalSplit(t_hat, lam_hat, t_all - t_hat, lam_all - lam_hat, int(m.sum()))


def restricted_counts(g: Graph, t_cap: float, backend: str | None = None) -> tuple[int, int]:
    """(T, Lambda) of the subgraph induced by vertices of type at most ``t_cap``."""
    _require_types(g)
    m = g.types <= t_cap
    tri = int(triangles_per_vertex(g, m, backend).sum() // 3)
    return tri, _pairs(masked_degrees(g, m)[m])


def restricted_clustering(g: Graph, t_cap: float, backend: str | None = None) -> Optional[float]:
    """Global clustering of the subgraph on vertices with type <= t_cap (None if undefined)."""
    tri, lam = restricted_counts(g, t_cap, backend)
    if lam == 0:
        return None
    return 3.0 * tri / lam


def degree_sequence(g: Graph) -> np.ndarray:
    return g.degrees.copy()


@dataclass
class ClusterStats:
    n: int
    edges: int
    triangles: int
    paths2: int
    global_clustering: Optional[float]
    local_clustering_mean: Optional[float]
    t_hat: Optional[int] = None
    lambda_hat: Optional[int] = None
    t_tilde: Optional[int] = None
    lambda_tilde: Optional[int] = None
    restricted: dict = field(default_factory=dict)

    # column order of :meth:`row`; restricted values follow, one per cap
    COLUMNS = ("n", "edges", "triangles", "paths2", "global_clustering",
               "local_clustering_mean", "t_hat", "lambda_hat", "t_tilde", "lambda_tilde")

    def row(self) -> list:
        out = [getattr(self, c) for c in self.COLUMNS]
        out += [self.restricted[k] for k in sorted(self.restricted)]
        return ["" if v is None else v for v in out]

    def header(self) -> list[str]:
        return list(self.COLUMNS) + [f"restricted_{k:g}" for k in sorted(self.restricted)]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["restricted"] = {f"{k:g}": v for k, v in sorted(self.restricted.items())}
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def cluster_stats(g: Graph, omega: Optional[float] = None, type_caps: Sequence[float] = (),
                  convention: str = "exclude", backend: str | None = None) -> ClusterStats:
    tri = count_triangles(g, backend)
    lam = count_paths2(g)
    st = ClusterStats(
        n=g.n,
        edges=g.edge_count,
        triangles=tri,
        paths2=lam,
        global_clustering=None if lam == 0 else 3.0 * tri / lam,
        local_clustering_mean=local_clustering_mean(g, convention, backend),
    )
    if omega is not None and g.types is not None:
        sp = typical_split(g, omega, backend)
        st.t_hat, st.lambda_hat = sp.t_hat, sp.lambda_hat
        st.t_tilde, st.lambda_tilde = sp.t_tilde, sp.lambda_tilde
    for cap in type_caps:
        st.restricted[float(cap)] = restricted_clustering(g, cap, backend)
    return st


def write_stats_csv(stats: Sequence[ClusterStats], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        if stats:
            w.writerow(stats[0].header())
        for s in stats:
            w.writerow(s.row())
