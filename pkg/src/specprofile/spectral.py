"""Dirichlet eigenvalues, the Faber-Krahn quantity, conductance and log-Sobolev.

``lambda_fk`` minimizes the ratio of the Dirichlet form to the variance over
nonnegative functions supported in a set ``A``. The ``||f||_1^2`` term in the
denominator makes this a cone-constrained problem rather than an eigenvalue
problem, but on the support ``S`` of a minimizer the function is a stationary
point of a generalized Rayleigh quotient, i.e. a nonnegative generalized
eigenvector of the pair (form on S, variance on S). Enumerating supports
therefore solves the problem exactly for small sets; projected gradient with
random restarts handles larger ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

import numpy as np
from scipy.optimize import minimize
from scipy.special import xlog1py

from .errors import EmptySet, SingletonFullGraph
from .graph import (
    WeightedGraph,
    dirichlet_form_pairwise,
    require_connected,
    vertex_set,
)

__all__ = [
    "FaberKrahnValue",
    "LogSobolevValue",
    "EXACT_SUPPORT_MAX",
    "lambda0",
    "lambda_fk",
    "lambda_fk_numeric",
    "fk_quotient",
    "spectral_gap",
    "gap_eigenvector",
    "conductance",
    "entropy_of_square",
    "log_sobolev",
    "log_sobolev_quotient",
    "support_values",
    "philox",
]

#: largest set for which ``lambda_fk`` enumerates every support
EXACT_SUPPORT_MAX = 14

#: entries above ``-NONNEG_TOL * max|f|`` count as nonnegative
NONNEG_TOL = 1e-9

_BATCH = 20000


def philox(seed: int, stream: int) -> np.random.Generator:
    """Counter-based generator; one independent stream per (seed, stream)."""
    key = np.array([seed % 2**64, stream % 2**64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


@dataclass(frozen=True)
class FaberKrahnValue:
    vertices: tuple[int, ...]
    measure: float
    lambda0: float
    value: float
    minimizer: np.ndarray
    method: str  # "exact-eigen" | "closed-form" | "numeric-min" | "bound"

    @property
    def sandwich_upper(self) -> float:
        if self.measure >= 1.0:
            return float("inf")
        return self.lambda0 / (1.0 - self.measure)


@dataclass(frozen=True)
class LogSobolevValue:
    alpha: float
    minimizer: np.ndarray
    restarts: int
    residual: float
    # the infimum is approached by f -> constant and equals gap/2 there
    constant_limit: bool


# ---------------------------------------------------------------- lambda_0


def lambda0(g: WeightedGraph, a: Iterable[int]) -> float:
    """Smallest Dirichlet eigenvalue of the Laplacian restricted to ``a``."""
    idx = vertex_set(g, a)
    sub = g.laplacian_sym[np.ix_(idx, idx)]
    return float(max(np.linalg.eigvalsh(sub)[0], 0.0))


def _lambda0_pair(g: WeightedGraph, idx: np.ndarray) -> tuple[float, np.ndarray]:
    sub = g.laplacian_sym[np.ix_(idx, idx)]
    vals, vecs = np.linalg.eigh(sub)
    u = vecs[:, 0]
    u = u if u.sum() >= 0 else -u
    f = np.zeros(g.num_vertices)
    f[idx] = np.clip(u / np.sqrt(g.pi[idx]), 0.0, None)
    return float(max(vals[0], 0.0)), f


# ---------------------------------------------------------------- spectral gap


def spectral_gap(g: WeightedGraph) -> float:
    """Second smallest eigenvalue of ``I - K``."""
    require_connected(g)
    if g.num_vertices == 1:
        raise SingletonFullGraph("a one-vertex graph has no spectral gap")
    return float(np.linalg.eigvalsh(g.laplacian_sym)[1])


def gap_eigenvector(g: WeightedGraph) -> tuple[float, np.ndarray]:
    """Gap and an ``L^2(pi)``-normalized eigenfunction for it."""
    require_connected(g)
    if g.num_vertices == 1:
        raise SingletonFullGraph("a one-vertex graph has no spectral gap")
    vals, vecs = np.linalg.eigh(g.laplacian_sym)
    psi = vecs[:, 1] / np.sqrt(g.pi)
    return float(vals[1]), psi


# ---------------------------------------------------------------- lambda(A)


def fk_quotient(g: WeightedGraph, f: np.ndarray) -> float:
    """``<Lf, f> / (||f||_2^2 - ||f||_1^2)`` for a nonnegative ``f``."""
    f = np.asarray(f, dtype=float)
    num = dirichlet_form_pairwise(g, f)
    mean = float(np.sum(f * g.pi))
    var = float(np.sum((f - mean) ** 2 * g.pi))
    if var <= 0.0:
        return float("inf")
    return num / var


def support_values(g: WeightedGraph, idx: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Smallest nonnegative stationary value for each support in a batch.

    ``idx`` has shape ``(N, s)``: N proper vertex subsets of equal size s.
    Returns ``(values, vectors)`` with ``values[i] = inf`` when no generalized
    eigenvector on that support is nonnegative; ``vectors[i]`` is the function
    on ``idx[i]`` (normalized to unit variance) achieving ``values[i]``.
    """
    idx = np.asarray(idx, dtype=np.int64)
    n_sets, s = idx.shape
    values = np.full(n_sets, np.inf)
    vectors = np.zeros((n_sets, s))
    for lo in range(0, n_sets, _BATCH):
        sl = slice(lo, lo + _BATCH)
        v, f = _support_batch(g, idx[sl])
        values[sl] = v
        vectors[sl] = f
    return values, vectors


def _support_batch(g: WeightedGraph, idx: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    pis = g.pi[idx]
    q = np.sqrt(pis)
    mass = pis.sum(axis=1)
    lap = g.laplacian_sym[idx[:, :, None], idx[:, None, :]]
    # (I - q q^T)^{-1/2} = I + beta q q^T turns the variance into |h|^2
    beta = (1.0 / np.sqrt(1.0 - mass) - 1.0) / mass
    s = idx.shape[1]
    t = np.eye(s)[None] + beta[:, None, None] * q[:, :, None] * q[:, None, :]
    c = t @ lap @ t
    c = 0.5 * (c + np.swapaxes(c, 1, 2))
    vals, vecs = np.linalg.eigh(c)
    f = (t @ vecs) / q[:, :, None]
    sign = np.where(f.sum(axis=1, keepdims=True) >= 0, 1.0, -1.0)
    f = f * sign
    scale = np.abs(f).max(axis=1, keepdims=True)
    ok = f.min(axis=1, keepdims=True) >= -NONNEG_TOL * scale
    ok = ok[:, 0, :]
    has = ok.any(axis=1)
    first = np.argmax(ok, axis=1)
    rows = np.arange(len(idx))
    out_vals = np.where(has, np.maximum(vals[rows, first], 0.0), np.inf)
    out_vecs = np.clip(f[rows, :, first], 0.0, None)
    return out_vals, out_vecs


def _subsets_of(idx: np.ndarray):
    for size in range(1, len(idx) + 1):
        combos = np.array(list(combinations(range(len(idx)), size)), dtype=np.int64)
        yield idx[combos]


def lambda_fk(
    g: WeightedGraph,
    a: Iterable[int],
    *,
    restarts: int = 16,
    seed: int = 0,
    exact_max: int = EXACT_SUPPORT_MAX,
) -> FaberKrahnValue:
    """Faber-Krahn quantity of ``a``: inf of form / variance over ``f >= 0`` on ``a``.

    Sets of at most ``exact_max`` vertices are solved by support enumeration;
    larger sets use :func:`lambda_fk_numeric`. For the whole vertex set the
    value is the spectral gap.
    """
    idx = vertex_set(g, a)
    n = g.num_vertices
    if idx.size == n:
        if n == 1:
            raise SingletonFullGraph("lambda of the full one-vertex graph is undefined")
        gap, psi = gap_eigenvector(g)
        f = psi - psi.min()
        return FaberKrahnValue(
            tuple(int(x) for x in idx), 1.0, 0.0, fk_quotient(g, f), f, "exact-eigen"
        )
    lam0, f0 = _lambda0_pair(g, idx)
    mass = float(g.pi[idx].sum())
    verts = tuple(int(x) for x in idx)

    if idx.size == 1:
        f = np.zeros(n)
        f[idx] = 1.0
        return FaberKrahnValue(verts, mass, lam0, fk_quotient(g, f), f, "closed-form")

    if idx.size <= exact_max:
        best, best_f = np.inf, None
        for batch in _subsets_of(idx):
            vals, vecs = support_values(g, batch)
            i = int(np.argmin(vals))
            if vals[i] < best:
                best = vals[i]
                best_f = np.zeros(n)
                best_f[batch[i]] = vecs[i]
        q = fk_quotient(g, best_f)
        q0 = fk_quotient(g, f0)
        if q0 < q:
            q, best_f = q0, f0
        return FaberKrahnValue(verts, mass, lam0, q, best_f, "exact-eigen")

    return lambda_fk_numeric(g, idx, restarts=restarts, seed=seed)


def lambda_fk_numeric(
    g: WeightedGraph,
    a: Iterable[int],
    *,
    restarts: int = 16,
    seed: int = 0,
    max_iter: int = 4000,
) -> FaberKrahnValue:
    """Projected-gradient estimate of ``lambda(a)`` with random restarts.

    Each run descends on the nonnegative cone with the variance normalized
    to one, then re-solves exactly on the support it converged to. The
    clipped Dirichlet eigenvector is always one of the starts, which keeps
    the result below ``lambda0 / (1 - pi(a))``. If a run lands outside that
    sandwich the restart count is doubled (twice) before falling back to
    the bound itself.
    """
    idx = vertex_set(g, a)
    n = g.num_vertices
    mass = float(g.pi[idx].sum())
    if mass >= 1.0 - 1e-15:
        return lambda_fk(g, idx)
    lam0, f0 = _lambda0_pair(g, idx)
    verts = tuple(int(x) for x in idx)
    upper = lam0 / (1.0 - mass)

    w = (np.diag(g.pi) - g.weight_matrix / g.total_weight)[np.ix_(idx, idx)]
    p = g.pi[idx]

    def run(start: np.ndarray) -> tuple[float, np.ndarray]:
        x = _pgd(w, p, start, max_iter)
        full = np.zeros(n)
        full[idx] = x
        support = idx[x > 0]
        if 0 < support.size < n:
            vals, vecs = support_values(g, support[None, :])
            if np.isfinite(vals[0]):
                alt = np.zeros(n)
                alt[support] = vecs[0]
                if fk_quotient(g, alt) < fk_quotient(g, full):
                    full = alt
        return fk_quotient(g, full), full

    n_restarts = restarts
    for attempt in range(3):
        best, best_f = fk_quotient(g, f0), f0
        starts = [f0[idx]]
        for r in range(n_restarts):
            rng = philox(seed, attempt * 1_000_003 + r)
            x = rng.exponential(size=idx.size)
            x[rng.random(idx.size) < 0.3] = 0.0
            if not x.any():
                x[rng.integers(idx.size)] = 1.0
            starts.append(x)
        for x in starts:
            q, f = run(x)
            if q < best:
                best, best_f = q, f
        if lam0 - 1e-10 <= best <= upper + 1e-7:
            return FaberKrahnValue(verts, mass, lam0, best, best_f, "numeric-min")
        n_restarts *= 2
    return FaberKrahnValue(verts, mass, lam0, upper, f0, "bound")


def _pgd(w: np.ndarray, p: np.ndarray, x: np.ndarray, max_iter: int) -> np.ndarray:
    """Minimize ``x'Wx / x'Bx`` over ``x >= 0`` with ``B = diag(p) - p p'``."""

    def var(y):
        m = y @ p
        return float(y @ (p * y) - m * m)

    def normalize(y):
        v = var(y)
        return y / np.sqrt(v) if v > 0 else y

    x = normalize(np.clip(np.asarray(x, dtype=float), 0.0, None))
    q = float(x @ w @ x)
    step = 1.0
    for _ in range(max_iter):
        bx = p * x - p * (p @ x)
        grad = 2.0 * (w @ x - q * bx)
        improved = False
        while step > 1e-14:
            y = np.clip(x - step * grad, 0.0, None)
            if var(y) <= 0:
                step *= 0.5
                continue
            y = normalize(y)
            qy = float(y @ w @ y)
            if qy < q - 1e-8 * step * float(grad @ grad):
                improved = True
                break
            step *= 0.5
        if not improved:
            break
        rel = (q - qy) / max(abs(q), 1e-300)
        x, q = y, qy
        step *= 2.0
        if rel < 1e-14:
            break
    return x


# ---------------------------------------------------------------- conductance


def conductance(g: WeightedGraph, s: Iterable[int]) -> float:
    """Boundary weight of ``s`` over its total vertex weight."""
    idx = vertex_set(g, s)
    inside = np.zeros(g.num_vertices, dtype=bool)
    inside[idx] = True
    boundary = float(g.weight_matrix[np.ix_(inside, ~inside)].sum())
    return boundary / float(g.vertex_weights[idx].sum())


# ---------------------------------------------------------------- log-Sobolev


def _phi(u: np.ndarray) -> np.ndarray:
    """``(1 + u) log(1 + u) - u``, accurate near ``u = 0``."""
    u = np.asarray(u, dtype=float)
    out = np.empty_like(u)
    small = np.abs(u) < 1e-2
    us = u[small]
    acc = np.zeros_like(us)
    power = us * us
    for j in range(2, 12):
        acc += (-1) ** j * power / (j * (j - 1))
        power = power * us
    out[small] = acc
    ub = u[~small]
    out[~small] = xlog1py(1.0 + ub, ub) - ub
    return out


def _relative_square(f: np.ndarray, pi: np.ndarray) -> tuple[float, np.ndarray]:
    # f(x)^2 / E f^2 - 1 assembled from pairwise differences, so it stays
    # accurate when f is close to a constant
    h = f * f
    m = float(h @ pi)
    diff = (f[:, None] - f[None, :]) * (f[:, None] + f[None, :])
    return m, (diff @ pi) / m


def entropy_of_square(g: WeightedGraph, f: np.ndarray) -> float:
    """``Ent_pi(f^2) = E[f^2 log(f^2 / E f^2)]``."""
    f = np.asarray(f, dtype=float)
    m, u = _relative_square(f, g.pi)
    if m <= 0.0:
        return 0.0
    return m * float(np.sum(g.pi * _phi(u)))


def log_sobolev_quotient(g: WeightedGraph, f: np.ndarray) -> float:
    ent = entropy_of_square(g, f)
    if ent <= 0.0:
        return float("inf")
    return dirichlet_form_pairwise(g, f) / ent


def log_sobolev(
    g: WeightedGraph,
    restarts: int = 16,
    tolerance: float = 1e-6,
    *,
    seed: int = 0,
) -> LogSobolevValue:
    """Numerical log-Sobolev constant (an upper bound certified by its minimizer).

    Starts are random positive vectors, finite perturbations ``1 + c psi``
    along low eigenfunctions, and near-constant probes ``1 +- 1e-6 psi``
    whose quotient tends to ``gap / 2``; the last ones cover graphs where
    the infimum is only reached in the limit ``f -> const``.
    """
    require_connected(g)
    n = g.num_vertices
    if n < 2:
        raise SingletonFullGraph("log-Sobolev constant needs at least two vertices")
    pi = g.pi
    wmat = np.diag(pi) - g.weight_matrix / g.total_weight
    vals, vecs = np.linalg.eigh(g.laplacian_sym)
    psis = vecs / np.sqrt(pi)[:, None]

    def objective(f):
        f = np.maximum(f, 1e-12)
        num = float(f @ wmat @ f)
        m, u = _relative_square(f, pi)
        ent = m * float(np.sum(pi * _phi(u)))
        if ent <= 1e-300:
            return 1e300, np.zeros_like(f)
        dnum = 2.0 * wmat @ f
        log_ratio = np.where(
            np.abs(u) < 0.5,
            np.log1p(np.clip(u, -0.5, 0.5)),
            np.log(f * f) - np.log(m),
        )
        dent = 2.0 * pi * f * log_ratio
        q = num / ent
        return q, (dnum - q * dent) / ent

    starts = []
    for j in range(1, min(n, 4)):
        psi = psis[:, j] / np.max(np.abs(psis[:, j]))
        for c in (0.9, 0.5, -0.5, -0.9):
            starts.append(1.0 + c * psi)
    for r in range(restarts):
        rng = philox(seed, r)
        starts.append(np.exp(rng.normal(scale=1.0 + r % 3, size=n)))

    best_q, best_f, best_limit = np.inf, None, False
    for x0 in starts:
        res = minimize(
            objective,
            x0,
            jac=True,
            method="L-BFGS-B",
            bounds=[(1e-12, None)] * n,
            options={"maxiter": 2000, "ftol": 1e-15, "gtol": 1e-12},
        )
        f = np.maximum(res.x, 1e-12)
        q = log_sobolev_quotient(g, f)
        if q < best_q:
            best_q, best_f, best_limit = q, f, False

    psi2 = psis[:, 1] / np.max(np.abs(psis[:, 1]))
    for eps in (1e-6, -1e-6):
        f = 1.0 + eps * psi2
        q = log_sobolev_quotient(g, f)
        if q < best_q:
            best_q, best_f, best_limit = q, f, True

    spread = float(np.ptp(best_f) / np.max(best_f))
    if spread < 1e-4:
        best_limit = True
    _, grad = objective(best_f)
    residual = float(np.linalg.norm(grad) * np.linalg.norm(best_f) / max(best_q, 1e-300))
    if not best_limit and residual > tolerance:
        res = minimize(
            objective,
            best_f,
            jac=True,
            method="L-BFGS-B",
            bounds=[(1e-12, None)] * n,
            options={"maxiter": 20000, "ftol": 0.0, "gtol": 1e-14},
        )
        f = np.maximum(res.x, 1e-12)
        q = log_sobolev_quotient(g, f)
        if q <= best_q:
            best_q, best_f = q, f
            _, grad = objective(best_f)
            residual = float(
                np.linalg.norm(grad) * np.linalg.norm(best_f) / max(best_q, 1e-300)
            )
    return LogSobolevValue(float(best_q), best_f, len(starts) + 2, residual, best_limit)
