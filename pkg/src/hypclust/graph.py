"""Undirected simple graphs stored as sorted compressed adjacency rows."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .hypgeom import ModelParams


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable graph; ``indices[indptr[i]:indptr[i+1]]`` are the sorted neighbours of i.

    ``types`` and ``radius`` are carried along for the type-dependent
    statistics; they are None for graphs that did not come from the model.
    """

    indptr: np.ndarray
    indices: np.ndarray
    model: str = "none"
    params: Optional[ModelParams] = None
    seed: Optional[int] = None
    edge_seed: Optional[int] = None
    types: Optional[np.ndarray] = None
    radius: Optional[float] = None

    @property
    def n(self) -> int:
        return len(self.indptr) - 1

    @property
    def edge_count(self) -> int:
        return len(self.indices) // 2

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def has_edge(self, i: int, j: int) -> bool:
        row = self.neighbors(i)
        k = np.searchsorted(row, j)
        return bool(k < len(row) and row[k] == j)

    def edges(self) -> tuple[np.ndarray, np.ndarray]:
        """(u, v) arrays with u < v in lexicographic order."""
        owner = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)
        keep = owner < self.indices
        return owner[keep], self.indices[keep]

    def same_edges(self, other: "Graph") -> bool:
        return (
            self.n == other.n
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )

    def metadata(self) -> dict:
        return {
            "model": self.model,
            "n": self.n,
            "edge_count": self.edge_count,
            "seed": self.seed,
            "edge_seed": self.edge_seed,
            "radius": self.radius,
            "params": None if self.params is None else self.params.as_dict(),
        }

    @classmethod
    def from_pairs(cls, n: int, u, v, **meta) -> "Graph":
        """Build from an unordered pair list; duplicates are merged, loops rejected."""
        u = np.asarray(u, dtype=np.int64).ravel()
        v = np.asarray(v, dtype=np.int64).ravel()
        if u.shape != v.shape:
            raise ValueError("endpoint arrays differ in length")
        if u.size and (min(u.min(), v.min()) < 0 or max(u.max(), v.max()) >= n):
            raise ValueError("vertex index out of range")
        if np.any(u == v):
            raise ValueError("self-loops are not allowed")
        a = np.concatenate([u, v])
        b = np.concatenate([v, u])
        order = np.lexsort((b, a))
        a, b = a[order], b[order]
        if a.size:
            dup = np.concatenate([[False], (a[1:] == a[:-1]) & (b[1:] == b[:-1])])
            a, b = a[~dup], b[~dup]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(a, minlength=n), out=indptr[1:])
        return cls(indptr, b.astype(np.int64), **meta)

    @classmethod
    def from_edges(cls, n: int, edges, **meta) -> "Graph":
        edges = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
        return cls.from_pairs(n, edges[:, 0], edges[:, 1], **meta)

    def induced(self, keep) -> "Graph":
        """Subgraph induced by the boolean mask ``keep`` (vertices renumbered in order)."""
        keep = np.asarray(keep, dtype=bool)
        new_id = np.cumsum(keep) - 1
        u, v = self.edges()
        sel = keep[u] & keep[v]
        types = None if self.types is None else self.types[keep]
        return Graph.from_pairs(int(keep.sum()), new_id[u[sel]], new_id[v[sel]],
                                model=self.model, params=self.params, seed=self.seed,
                                edge_seed=self.edge_seed, types=types, radius=self.radius)


def write_edges_csv(g: Graph, path) -> None:
    u, v = g.edges()
    with open(path, "w") as fh:
        fh.write("u,v\n")
        if len(u):
            np.savetxt(fh, np.column_stack([u, v]), fmt="%d", delimiter=",")


def read_edges_csv(path):
    if not os.path.exists(path):
        raise FileNotFoundError(f"edge file not found: {path}")
    data = np.loadtxt(path, delimiter=",", skiprows=1, dtype=np.int64, ndmin=2)
    if data.size == 0:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    return data[:, 0], data[:, 1]


def write_metadata(g: Graph, path, extra: dict | None = None) -> None:
    meta = g.metadata()
    if extra:
        meta.update(extra)
    with open(path, "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
