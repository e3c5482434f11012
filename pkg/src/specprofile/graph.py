"""Weighted graphs and the reversible walk they carry.

A graph is a symmetric weight function on unordered vertex pairs. Everything
else (vertex weights, stationary measure, one-step kernel, Laplacian) is
derived from it and cached on the immutable graph object.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import (
    BadInputFile,
    Disconnected,
    DuplicateEdge,
    EmptySet,
    IsolatedVertex,
    NonpositiveWeight,
    VertexOutOfRange,
)

__all__ = [
    "WeightedGraph",
    "DirichletSummary",
    "build_graph",
    "from_weight_matrix",
    "load_graph",
    "dump_graph",
    "graph_to_dict",
    "graph_from_dict",
    "vertex_set",
    "measure",
    "is_connected",
    "require_connected",
    "stationary_distribution",
    "transition_kernel",
    "laplacian",
    "symmetrized_kernel",
    "dirichlet_operator",
    "dirichlet_form",
    "dirichlet_form_pairwise",
    "dirichlet_form_and_norms",
]


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """Immutable weighted graph on vertices ``0..num_vertices-1``.

    Weights are stored once per unordered pair as parallel arrays with
    ``rows[i] <= cols[i]``; a self-loop has ``rows[i] == cols[i]`` and
    contributes once to the vertex weight of its endpoint.

    Instances compare by identity, which lets expensive derived objects
    (eigendecompositions, subset tables) be cached per graph.
    """

    num_vertices: int
    rows: np.ndarray
    cols: np.ndarray
    values: np.ndarray

    @cached_property
    def weight_matrix(self) -> np.ndarray:
        n = self.num_vertices
        w = np.zeros((n, n))
        w[self.rows, self.cols] = self.values
        w[self.cols, self.rows] = self.values
        w.setflags(write=False)
        return w

    @cached_property
    def vertex_weights(self) -> np.ndarray:
        # a self-loop sits on the diagonal exactly once
        out = self.weight_matrix.sum(axis=1)
        out.setflags(write=False)
        return out

    @cached_property
    def total_weight(self) -> float:
        return float(self.vertex_weights.sum())

    @cached_property
    def pi(self) -> np.ndarray:
        out = self.vertex_weights / self.total_weight
        out.setflags(write=False)
        return out

    @cached_property
    def kernel(self) -> np.ndarray:
        out = self.weight_matrix / self.vertex_weights[:, None]
        out.setflags(write=False)
        return out

    @cached_property
    def symmetrized(self) -> np.ndarray:
        # sqrt(pi(x)/pi(y)) K(x,y) = w(x,y) / sqrt(w(x) w(y)); symmetric by construction
        s = np.sqrt(self.vertex_weights)
        out = self.weight_matrix / s[:, None] / s[None, :]
        out = 0.5 * (out + out.T)
        out.setflags(write=False)
        return out

    @cached_property
    def laplacian_sym(self) -> np.ndarray:
        """``I - M``: the Laplacian conjugated into an ordinary symmetric matrix."""
        out = np.eye(self.num_vertices) - self.symmetrized
        out.setflags(write=False)
        return out

    @cached_property
    def components(self) -> tuple[int, np.ndarray]:
        n = self.num_vertices
        adj = coo_matrix((np.ones(len(self.rows)), (self.rows, self.cols)), shape=(n, n))
        return connected_components(adj, directed=False)

    @property
    def num_edges(self) -> int:
        return len(self.values)

    def edges(self) -> list[tuple[int, int, float]]:
        return [
            (int(u), int(v), float(w))
            for u, v, w in zip(self.rows, self.cols, self.values)
        ]

    def __repr__(self) -> str:
        return f"WeightedGraph(num_vertices={self.num_vertices}, num_edges={self.num_edges})"


def build_graph(num_vertices: int, edges: Iterable[Sequence[float]]) -> WeightedGraph:
    """Validate an edge list of ``(u, v, weight)`` triples and build a graph.

    Pairs are unordered, so ``(1, 0, w)`` and ``(0, 1, w)`` name the same
    pair and listing both raises :class:`DuplicateEdge`.
    """
    n = int(num_vertices)
    if n < 1:
        raise VertexOutOfRange(f"num_vertices must be positive, got {num_vertices}")
    seen: dict[tuple[int, int], float] = {}
    for edge in edges:
        u, v, w = edge
        if int(u) != u or int(v) != v:
            raise VertexOutOfRange(f"non-integer vertex in edge {tuple(edge)}")
        u, v, w = int(u), int(v), float(w)
        if not (0 <= u < n and 0 <= v < n):
            raise VertexOutOfRange(f"edge ({u}, {v}) outside 0..{n - 1}")
        if not np.isfinite(w) or w <= 0.0:
            raise NonpositiveWeight(f"edge ({u}, {v}) has weight {w}")
        key = (u, v) if u <= v else (v, u)
        if key in seen:
            raise DuplicateEdge(f"pair {key} listed twice")
        seen[key] = w
    if seen:
        pairs = np.array(list(seen.keys()), dtype=np.int64)
        rows, cols = pairs[:, 0], pairs[:, 1]
        values = np.array(list(seen.values()), dtype=float)
    else:
        rows = cols = np.zeros(0, dtype=np.int64)
        values = np.zeros(0)
    return _make(n, rows, cols, values)


def from_weight_matrix(weights: np.ndarray) -> WeightedGraph:
    """Build a graph from a dense symmetric nonnegative matrix (zeros mean no edge)."""
    w = np.asarray(weights, dtype=float)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise ValueError("weight matrix must be square")
    if not np.allclose(w, w.T, rtol=0.0, atol=0.0):
        raise ValueError("weight matrix must be exactly symmetric")
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise NonpositiveWeight("weight matrix has negative or non-finite entries")
    rows, cols = np.nonzero(np.triu(w))
    return _make(w.shape[0], rows.astype(np.int64), cols.astype(np.int64), w[rows, cols])


def _make(n: int, rows: np.ndarray, cols: np.ndarray, values: np.ndarray) -> WeightedGraph:
    for arr in (rows, cols, values):
        arr.setflags(write=False)
    g = WeightedGraph(n, rows, cols, values)
    isolated = np.flatnonzero(g.vertex_weights <= 0.0)
    if isolated.size:
        raise IsolatedVertex(f"vertex {int(isolated[0])} has zero total weight")
    return g


# ---------------------------------------------------------------- JSON format


def graph_to_dict(g: WeightedGraph) -> dict:
    return {"num_vertices": g.num_vertices, "edges": [[u, v, w] for u, v, w in g.edges()]}


def graph_from_dict(data: dict) -> WeightedGraph:
    """Parse the ``{"num_vertices": n, "edges": [[u, v, w], ...]}`` format.

    The file format is stricter than :func:`build_graph`: each pair must be
    written with ``u <= v``.
    """
    if not isinstance(data, dict) or "num_vertices" not in data or "edges" not in data:
        raise BadInputFile("expected an object with 'num_vertices' and 'edges'")
    n = data["num_vertices"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise BadInputFile(f"num_vertices: expected a positive integer, got {n!r}")
    edges = data["edges"]
    if not isinstance(edges, list):
        raise BadInputFile("edges: expected a list")
    for i, e in enumerate(edges):
        if not isinstance(e, (list, tuple)) or len(e) != 3:
            raise BadInputFile(f"edges[{i}]: expected [u, v, w], got {e!r}")
        u, v, w = e
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in (u, v)):
            raise BadInputFile(f"edges[{i}]: vertex indices must be integers")
        if not isinstance(w, (int, float)) or isinstance(w, bool):
            raise BadInputFile(f"edges[{i}]: weight must be a number")
        if u > v:
            raise BadInputFile(f"edges[{i}]: expected u <= v, got ({u}, {v})")
    return build_graph(n, edges)


def load_graph(path: str | Path) -> WeightedGraph:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise BadInputFile(f"{path}: {exc.strerror}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise BadInputFile(f"{path}: invalid JSON ({exc.msg})") from exc
    return graph_from_dict(data)


def dump_graph(g: WeightedGraph, path: str | Path | None = None) -> str:
    text = json.dumps(graph_to_dict(g), separators=(", ", ": "))
    if path is not None:
        Path(path).write_text(text + "\n")
    return text


# ---------------------------------------------------------------- vertex sets


def vertex_set(g: WeightedGraph, a: Iterable[int]) -> np.ndarray:
    """Normalize a collection of vertices into a sorted unique index array."""
    idx = np.unique(np.fromiter((int(x) for x in a), dtype=np.int64))
    if idx.size == 0:
        raise EmptySet("vertex set is empty")
    if idx[0] < 0 or idx[-1] >= g.num_vertices:
        raise VertexOutOfRange(f"vertex set not inside 0..{g.num_vertices - 1}")
    return idx


def measure(g: WeightedGraph, a: Iterable[int]) -> float:
    return float(g.pi[vertex_set(g, a)].sum())


def is_connected(g: WeightedGraph) -> bool:
    return g.components[0] == 1


def require_connected(g: WeightedGraph) -> None:
    if not is_connected(g):
        raise Disconnected(f"graph has {g.components[0]} connected components")


# ---------------------------------------------------------------- operators


def stationary_distribution(g: WeightedGraph) -> np.ndarray:
    return np.array(g.pi)


def transition_kernel(g: WeightedGraph) -> np.ndarray:
    """Row-stochastic one-step kernel ``K(x, y) = w(x, y) / w(x)``."""
    return np.array(g.kernel)


def symmetrized_kernel(g: WeightedGraph) -> np.ndarray:
    return np.array(g.symmetrized)


def laplacian(g: WeightedGraph) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(I - K, M)`` where ``M = D^{1/2} K D^{-1/2}`` with ``D = diag(pi)``.

    ``I - K`` and ``I - M`` have the same spectrum; the second is symmetric,
    so eigenvalue work is done there.
    """
    return np.eye(g.num_vertices) - g.kernel, np.array(g.symmetrized)


def dirichlet_operator(g: WeightedGraph, a: Iterable[int]) -> np.ndarray:
    """Principal submatrix of ``I - K`` on ``a``.

    Acting on functions supported in ``a`` this is the zero-boundary Laplacian;
    dropping the rows outside ``a`` avoids the trivial zero eigenvalue that the
    zero-extended operator would carry.
    """
    idx = vertex_set(g, a)
    return (np.eye(g.num_vertices) - g.kernel)[np.ix_(idx, idx)]


def dirichlet_form(g: WeightedGraph, f: np.ndarray) -> float:
    """``<(I - K) f, f>`` in ``L^2(pi)``."""
    f = np.asarray(f, dtype=float)
    lf = f - g.kernel @ f
    return float(np.sum(lf * f * g.pi))


def dirichlet_form_pairwise(g: WeightedGraph, f: np.ndarray) -> float:
    """``1/2 sum_{x,y} pi(x) K(x,y) (f(x) - f(y))^2``, summed over stored pairs."""
    f = np.asarray(f, dtype=float)
    diff = f[g.rows] - f[g.cols]
    # pi(x) K(x, y) = w(x, y) / W; each unordered pair appears twice in the full sum
    return float(np.sum(g.values * diff * diff) / g.total_weight)


class DirichletSummary(NamedTuple):
    form: float
    l1: float
    l2: float
    variance: float


def dirichlet_form_and_norms(g: WeightedGraph, f: np.ndarray) -> DirichletSummary:
    """Dirichlet form and ``L^p(pi)`` norms of ``f``.

    The form is evaluated twice, as a matrix product and as a sum of squared
    differences, and the two must agree.
    """
    f = np.asarray(f, dtype=float)
    if f.shape != (g.num_vertices,) or not np.all(np.isfinite(f)):
        raise ValueError("f must be a finite vector with one entry per vertex")
    form = dirichlet_form(g, f)
    pairwise = dirichlet_form_pairwise(g, f)
    scale = max(1.0, float(np.max(np.abs(f))) ** 2)
    if abs(form - pairwise) > 1e-10 * scale:
        raise ArithmeticError(f"Dirichlet form mismatch: {form!r} vs {pairwise!r}")
    l1 = float(np.sum(np.abs(f) * g.pi))
    l2 = float(np.sqrt(np.sum(f * f * g.pi)))
    mean = float(np.sum(f * g.pi))
    variance = max(float(np.sum((f - mean) ** 2 * g.pi)), 0.0)
    return DirichletSummary(pairwise, l1, l2, variance)
