"""Graph path metrics, the K-rough-isometry predicate and binary trees."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import shortest_path

from .errors import BadInputFile, PartialMap
from .graph import WeightedGraph, build_graph

__all__ = [
    "PathMetric",
    "RoughIsometryReport",
    "path_metric",
    "check_rough_isometry",
    "binary_tree",
    "load_map",
]


@dataclass(frozen=True, eq=False)
class PathMetric:
    distances: np.ndarray  # hop counts, inf between components

    @property
    def num_vertices(self) -> int:
        return self.distances.shape[0]

    def __call__(self, u: int, v: int) -> float:
        return float(self.distances[u, v])


@dataclass(frozen=True)
class RoughIsometryReport:
    K: float
    holds: bool
    witness: tuple | None = None  # ("pair", a, b) or ("uncovered", y)

    def to_json(self) -> dict:
        return {"K": self.K, "holds": self.holds, "witness": list(self.witness) if self.witness else None}


def path_metric(g: WeightedGraph) -> PathMetric:
    """Unweighted shortest-path distances; any pair with positive weight is an edge."""
    n = g.num_vertices
    off = g.rows != g.cols
    adj = coo_matrix(
        (np.ones(int(off.sum())), (g.rows[off], g.cols[off])), shape=(n, n)
    ).tocsr()
    dist = shortest_path(adj, method="D", directed=False, unweighted=True)
    dist.setflags(write=False)
    return PathMetric(dist)


def check_rough_isometry(x: PathMetric, y: PathMetric, mapping, K: float) -> RoughIsometryReport:
    """Check both conditions exhaustively.

    For all ``a, b`` in X, ``d(a, b) / K - K <= d(f a, f b) <= K d(a, b) + K``,
    and every ``y`` in Y lies within ``K`` of the image. The witness of a
    failure is the lexicographically smallest violating pair, or failing that
    the smallest uncovered target.
    """
    f = np.asarray(mapping, dtype=np.int64)
    n = x.num_vertices
    if f.shape != (n,):
        raise PartialMap(f"map has {f.size} entries for {n} vertices")
    if n and (f.min() < 0 or f.max() >= y.num_vertices):
        raise PartialMap("map sends a vertex outside the target graph")
    if K <= 0:
        raise ValueError("K must be positive")
    dx = x.distances
    dy = y.distances[np.ix_(f, f)]
    with np.errstate(invalid="ignore"):
        low = dx / K - K
        high = K * dx + K
        # inf - inf style comparisons count as violations only when one side is finite
        bad = (dy < low) | (dy > high)
    bad &= ~(np.isinf(dx) & np.isinf(dy))
    if bad.any():
        a, b = np.argwhere(bad)[0]
        return RoughIsometryReport(float(K), False, ("pair", int(a), int(b)))
    cover = y.distances[f].min(axis=0) if n else np.full(y.num_vertices, math.inf)
    uncovered = np.flatnonzero(cover > K)
    if uncovered.size:
        return RoughIsometryReport(float(K), False, ("uncovered", int(uncovered[0])))
    return RoughIsometryReport(float(K), True)


def binary_tree(h: int) -> WeightedGraph:
    """Complete binary tree of height ``h``; vertex 0 is the root, parent of ``i`` is ``(i - 1) // 2``."""
    if h < 1:
        raise ValueError("height must be at least 1")
    n = 2 ** (h + 1) - 1
    return build_graph(n, [((i - 1) // 2, i, 1.0) for i in range(1, n)])


def load_map(path) -> list[int]:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise BadInputFile(f"map file {path}: {exc}") from exc
    if not isinstance(data, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in data):
        raise BadInputFile(f"map file {path}: expected a JSON array of vertex indices")
    return data
