"""Continuous-time heat kernel and uniform (L-infinity) mixing times.

Everything is evaluated from one symmetric eigendecomposition per graph:
with ``I - M = U diag(lam) U^T`` the functions ``psi_i = U[:, i] / sqrt(pi)``
are orthonormal in ``L^2(pi)`` and

    H_t(x, y) / pi(y) - 1 = sum_{i >= 2} exp(-lam_i t) psi_i(x) psi_i(y).

By Cauchy-Schwarz the largest such deviation sits on the diagonal, where every
term is nonnegative and decreasing in ``t``; that gives a monotone target for
bisection.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from .errors import NegativeTime
from .graph import WeightedGraph, require_connected

__all__ = [
    "SpectralDecomposition",
    "MixingReport",
    "decomposition",
    "heat_kernel",
    "linf_deviation",
    "offdiagonal_deviation",
    "start_deviation",
    "tau_inf",
    "tau_inf_from",
    "deviation_csv",
]


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    eigenvalues: np.ndarray  # ascending, of I - K
    vectors: np.ndarray  # orthonormal eigenvectors of I - M (columns)
    pi: np.ndarray

    @cached_property
    def psi(self) -> np.ndarray:
        """Eigenfunctions, orthonormal in ``L^2(pi)``."""
        return self.vectors / np.sqrt(self.pi)[:, None]

    @cached_property
    def _diag_weights(self) -> np.ndarray:
        # psi_i(x)^2 for the non-stationary modes
        return self.psi[:, 1:] ** 2

    def decay(self, t: float) -> np.ndarray:
        return np.exp(-self.eigenvalues[1:] * t)

    def relative_kernel(self, t: float) -> np.ndarray:
        """``H_t(x, y) / pi(y) - 1`` as a full matrix."""
        p = self.psi[:, 1:]
        return (p * self.decay(t)) @ p.T

    def diagonal_excess(self, t: float) -> np.ndarray:
        """``H_t(x, x) / pi(x) - 1`` for every ``x``."""
        return self._diag_weights @ self.decay(t)


@lru_cache(maxsize=64)
def decomposition(g: WeightedGraph) -> SpectralDecomposition:
    require_connected(g)
    vals, vecs = np.linalg.eigh(g.laplacian_sym)
    # the stationary mode is sqrt(pi) exactly; pin it to avoid a sign/rounding wobble
    vecs[:, 0] = np.sqrt(g.pi)
    vals[0] = 0.0
    vals = np.clip(vals, 0.0, 2.0)
    for arr in (vals, vecs):
        arr.setflags(write=False)
    return SpectralDecomposition(vals, vecs, np.array(g.pi))


def _check_time(t: float) -> None:
    if t < 0:
        raise NegativeTime(f"time must be nonnegative, got {t}")


def heat_kernel(g: WeightedGraph, t: float) -> np.ndarray:
    """``H_t = exp(-t (I - K))`` via the spectral decomposition."""
    _check_time(t)
    if t == 0:
        return np.eye(g.num_vertices)
    d = decomposition(g)
    return (d.relative_kernel(t) + 1.0) * d.pi[None, :]


def linf_deviation(g: WeightedGraph, t: float, *, check: bool = False) -> float:
    """``d(t) = sup_{x,y} |H_t(x, y) / pi(y) - 1|``, read off the diagonal.

    With ``check=True`` the full matrix is formed as well and the diagonal
    maximum is asserted to dominate it.
    """
    _check_time(t)
    d = decomposition(g)
    if t == 0:
        return float(1.0 / d.pi.min() - 1.0)
    value = float(d.diagonal_excess(t).max())
    if check:
        full = offdiagonal_deviation(g, t)
        if full > value + 1e-9:
            raise ArithmeticError(f"off-diagonal deviation {full} exceeds diagonal {value}")
    return value


def offdiagonal_deviation(g: WeightedGraph, t: float) -> float:
    """Relative deviation maximized over every pair ``(x, y)``."""
    _check_time(t)
    d = decomposition(g)
    return float(np.abs(d.relative_kernel(t)).max())


def start_deviation(g: WeightedGraph, x: int, t: float) -> float:
    """``max_y |H_t(x, y) / pi(y) - 1|`` for one starting vertex."""
    _check_time(t)
    d = decomposition(g)
    if t == 0:
        return float(max(1.0 / d.pi[x] - 1.0, 1.0 if len(d.pi) > 1 else 0.0))
    p = d.psi[:, 1:]
    row = (p[x] * d.decay(t)) @ p.T
    return float(np.abs(row).max())


@dataclass
class MixingReport:
    epsilon: float
    tau_inf: float
    bracket: tuple[float, float]
    samples: list[tuple[float, float]] = field(default_factory=list)
    per_start: dict[int, float] = field(default_factory=dict)
    rho: float | None = None

    def to_json(self) -> dict:
        out = {
            "epsilon": self.epsilon,
            "tau_inf": self.tau_inf,
            "bracket": list(self.bracket),
            "samples": [{"t": t, "d": d} for t, d in self.samples],
        }
        if self.per_start:
            out["per_start"] = {str(k): v for k, v in sorted(self.per_start.items())}
        if self.rho is not None:
            out["rho"] = self.rho
        return out


def _bisect(fn, eps: float, lo: float, hi: float, rtol: float) -> tuple[float, float]:
    # invariant: fn(lo) > eps >= fn(hi)
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if fn(mid) > eps:
            lo = mid
        else:
            hi = mid
    return lo, hi


def tau_inf(
    g: WeightedGraph,
    epsilon: float = 0.5,
    *,
    rtol: float = 1e-12,
    num_samples: int = 50,
) -> MixingReport:
    """Uniform mixing time: first ``t`` with ``d(t) <= epsilon``.

    The upper end of the bracket starts at ``1 / gap`` and doubles until
    ``d`` drops below ``epsilon``; bisection then shrinks the bracket to a
    relative width ``rtol``. The returned time is the upper end, so
    ``d(tau) <= epsilon`` always holds.
    """
    d = decomposition(g)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")

    def dev(t: float) -> float:
        return float(d.diagonal_excess(t).max())

    d0 = float(1.0 / d.pi.min() - 1.0)
    if d0 <= epsilon:
        return MixingReport(float(epsilon), 0.0, (0.0, 0.0), [(0.0, d0)])
    gap = float(d.eigenvalues[1])
    hi = 1.0 / gap
    lo = 0.0
    while dev(hi) > epsilon:
        lo, hi = hi, 2.0 * hi
    lo, hi = _bisect(dev, epsilon, lo, hi, rtol)
    ts = np.geomspace(hi * 1e-3, hi * 4.0, num_samples)
    samples = [(0.0, d0)] + [(float(t), dev(float(t))) for t in ts]
    return MixingReport(float(epsilon), hi, (lo, hi), samples)


def tau_inf_from(
    g: WeightedGraph,
    x: int,
    epsilon: float = 0.5,
    *,
    grid: int = 400,
    rtol: float = 1e-12,
) -> float:
    """Mixing time from a single start ``x``.

    ``t -> max_y |H_t(x, y) / pi(y) - 1|`` need not be monotone, so it is
    scanned on a geometric grid up to the global mixing time (which bounds
    it) and the last grid crossing of ``epsilon`` is refined by bisection.
    """
    if not 0 <= x < g.num_vertices:
        raise IndexError(f"start vertex {x} out of range")

    def dev(t: float) -> float:
        return start_deviation(g, x, t)

    if dev(0.0) <= epsilon:
        return 0.0
    t_max = tau_inf(g, epsilon).tau_inf
    ts = np.concatenate(([0.0], np.geomspace(t_max * 1e-6, t_max, grid)))
    above = [i for i, t in enumerate(ts) if dev(float(t)) > epsilon]
    j = above[-1]
    if j == len(ts) - 1:
        # the global time bounds this one, so this is only a rounding edge
        return float(t_max)
    _, hi = _bisect(dev, epsilon, float(ts[j]), float(ts[j + 1]), rtol)
    return hi


def deviation_csv(report: MixingReport) -> str:
    buf = io.StringIO()
    buf.write("t,d\n")
    for t, d in report.samples:
        buf.write(f"{t:.12g},{d:.12g}\n")
    return buf.getvalue()


def relative_error(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), math.ulp(1.0))
