"""Spectral profile, dyadic Rayleigh sets, and the integral rho.

Exact mode enumerates every vertex subset. For each proper subset ``S`` the
smallest nonnegative stationary value on support exactly ``S`` is computed in
one batched eigen-solve; ``lambda(A)`` is then the minimum of those values over
``S`` contained in ``A`` (a subset-min transform), and the profile is the
running minimum of the same values ordered by measure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from .errors import SingletonGraph, TooLargeForExact
from .graph import WeightedGraph, require_connected
from .spectral import spectral_gap, support_values

__all__ = [
    "EXACT_MAX_VERTICES",
    "SubsetTable",
    "SpectralProfileCurve",
    "RayleighSet",
    "RayleighSets",
    "RhoBand",
    "RhoResult",
    "subset_table",
    "spectral_profile",
    "rayleigh_sets",
    "rho",
    "mask_to_vertices",
]

EXACT_MAX_VERTICES = 20

_MEASURE_RTOL = 1e-12
_TIE_RTOL = 1e-9


def mask_to_vertices(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def _members(masks: np.ndarray, n: int) -> np.ndarray:
    return ((masks[:, None] >> np.arange(n)) & 1).astype(bool)


@dataclass(eq=False)
class SubsetTable:
    """Per-subset quantities indexed by bitmask (bit ``i`` set means vertex ``i``)."""

    graph: WeightedGraph
    measure: np.ndarray
    support_value: np.ndarray  # smallest nonnegative stationary value with support exactly S
    lam: np.ndarray  # lambda(S) = min of support_value over subsets of S
    gap: float

    @property
    def num_vertices(self) -> int:
        return self.graph.num_vertices

    @cached_property
    def lambda0(self) -> np.ndarray:
        """Dirichlet eigenvalue of every subset (computed on first use)."""
        g = self.graph
        n = g.num_vertices
        masks = np.arange(1 << n, dtype=np.int64)
        out = np.full(1 << n, np.nan)
        sizes = np.array([bin(m).count("1") for m in range(1 << n)])
        members = _members(masks, n)
        for s in range(1, n + 1):
            sel = np.flatnonzero(sizes == s)
            idx = np.nonzero(members[sel])[1].reshape(len(sel), s)
            sub = g.laplacian_sym[idx[:, :, None], idx[:, None, :]]
            out[sel] = np.maximum(np.linalg.eigvalsh(sub)[:, 0], 0.0)
        out.setflags(write=False)
        return out

    def lam_of(self, vertices) -> float:
        mask = 0
        for v in vertices:
            mask |= 1 << int(v)
        return float(self.lam[mask])


@lru_cache(maxsize=32)
def subset_table(g: WeightedGraph) -> SubsetTable:
    """Enumerate all subsets of a connected graph with at most 20 vertices."""
    n = g.num_vertices
    if n > EXACT_MAX_VERTICES:
        raise TooLargeForExact(f"exact enumeration needs n <= {EXACT_MAX_VERTICES}, got {n}")
    if n < 2:
        raise SingletonGraph("profile needs at least two vertices")
    require_connected(g)
    full = (1 << n) - 1
    masks = np.arange(1 << n, dtype=np.int64)
    members = _members(masks, n)
    measure = members.astype(float) @ g.pi
    measure[full] = 1.0
    sizes = members.sum(axis=1)

    values = np.full(1 << n, np.inf)
    for s in range(1, n):
        sel = np.flatnonzero(sizes == s)
        idx = np.nonzero(members[sel])[1].reshape(len(sel), s)
        values[sel], _ = support_values(g, idx)
    gap = spectral_gap(g)
    values[full] = gap

    lam = values.copy()
    for i in range(n):
        view = lam.reshape(-1, 2, 1 << i)
        np.minimum(view[:, 1, :], view[:, 0, :], out=view[:, 1, :])
    for arr in (measure, values, lam):
        arr.setflags(write=False)
    return SubsetTable(g, measure, values, lam, gap)


# ---------------------------------------------------------------- profile


@dataclass(frozen=True)
class SpectralProfileCurve:
    """Piecewise-constant profile: ``values[i]`` holds on ``[breakpoints[i], breakpoints[i+1])``.

    The last breakpoint is 1 and its value (the spectral gap) is kept for all
    larger ``r``.
    """

    breakpoints: np.ndarray
    values: np.ndarray
    pi_star: float
    gap: float

    def __call__(self, r: float) -> float:
        if r < self.pi_star * (1 - _MEASURE_RTOL):
            raise ValueError(f"profile undefined below pi_* = {self.pi_star}")
        i = int(np.searchsorted(self.breakpoints, r * (1 + _MEASURE_RTOL), side="right")) - 1
        return float(self.values[max(i, 0)])

    def bands(self) -> list[tuple[float, float, float]]:
        ends = list(self.breakpoints[1:]) + [math.inf]
        return [
            (float(a), float(b), float(v))
            for a, b, v in zip(self.breakpoints, ends, self.values)
        ]

    def to_json(self) -> dict:
        return {
            "pi_star": self.pi_star,
            "gap": self.gap,
            "curve": [
                {"r_from": a, "r_to": (None if math.isinf(b) else b), "lambda": v}
                for a, b, v in self.bands()
            ],
        }


def spectral_profile(g: WeightedGraph, mode: str = "exact") -> SpectralProfileCurve:
    if mode != "exact":
        raise ValueError(f"unsupported profile mode {mode!r}; only 'exact' is available")
    table = subset_table(g)
    order = np.argsort(table.measure[1:], kind="stable") + 1
    meas = table.measure[order]
    running = np.minimum.accumulate(table.support_value[order])

    # collapse equal measures (up to rounding) onto one breakpoint
    keep = np.ones(len(meas), dtype=bool)
    keep[:-1] = meas[1:] > meas[:-1] * (1 + _MEASURE_RTOL)
    breakpoints = meas[keep]
    values = running[keep]
    breakpoints[-1] = 1.0
    return SpectralProfileCurve(breakpoints, values, float(breakpoints[0]), table.gap)


# ---------------------------------------------------------------- Rayleigh sets


@dataclass(frozen=True)
class RayleighSet:
    k: int
    vertices: tuple[int, ...]
    measure: float
    lam: float


@dataclass(frozen=True)
class RayleighSets:
    pi_star: float
    sets: list[RayleighSet] = field(default_factory=list)

    def __iter__(self):
        return iter(self.sets)

    def __len__(self):
        return len(self.sets)

    @property
    def ks(self) -> list[int]:
        return [s.k for s in self.sets]


def _max_dyadic_level(pi_star: float) -> int:
    k = 0
    while 2.0 ** -(k + 1) >= pi_star * (1 - _MEASURE_RTOL):
        k += 1
    return k


def rayleigh_sets(g: WeightedGraph) -> RayleighSets:
    """For each ``k`` with ``2^-k >= pi_*``, a set of measure ``<= 2^-k`` minimizing lambda.

    Ties (within a relative 1e-9) go to the lexicographically smallest sorted
    vertex tuple.
    """
    table = subset_table(g)
    n = g.num_vertices
    masks = np.arange(1, 1 << n)
    meas = table.measure[1:]
    lam = table.lam[1:]
    pi_star = float(meas.min())
    out = []
    for k in range(1, _max_dyadic_level(pi_star) + 1):
        ok = meas <= 2.0**-k * (1 + _MEASURE_RTOL)
        best = float(lam[ok].min())
        tied = masks[ok & (lam <= best * (1 + _TIE_RTOL) + 1e-15)]
        chosen = min(mask_to_vertices(int(m)) for m in tied)
        mask = sum(1 << v for v in chosen)
        out.append(RayleighSet(k, chosen, float(table.measure[mask]), float(table.lam[mask])))
    return RayleighSets(pi_star, out)


# ---------------------------------------------------------------- rho


@dataclass(frozen=True)
class RhoBand:
    r_from: float
    r_to: float
    lam: float
    contribution: float


@dataclass(frozen=True)
class RhoResult:
    rho: float
    epsilon: float
    lower: float
    upper: float
    bands: list[RhoBand]
    dyadic_sum: float
    pi_star: float

    def to_json(self) -> dict:
        return {
            "rho": self.rho,
            "epsilon": self.epsilon,
            "limits": [self.lower, self.upper],
            "pi_star": self.pi_star,
            "dyadic_sum": self.dyadic_sum,
            "bands": [
                {"r_from": b.r_from, "r_to": b.r_to, "lambda": b.lam, "contribution": b.contribution}
                for b in self.bands
            ],
        }


def integrate_profile(
    curve: SpectralProfileCurve, lower: float, upper: float
) -> tuple[float, list[RhoBand]]:
    """``int_lower^upper 2 dr / (r Lambda(r))`` for a piecewise-constant curve."""
    bands = []
    for a, b, lam in curve.bands():
        lo, hi = max(a, lower), min(b, upper)
        if hi <= lo:
            continue
        contribution = 2.0 * (math.log(hi) - math.log(lo)) / lam
        bands.append(RhoBand(lo, hi, lam, contribution))
    return math.fsum(band.contribution for band in bands), bands


def rho(g: WeightedGraph, epsilon: float = 0.5) -> RhoResult:
    """The integral ``int_{4 pi_*}^{4/eps} 2 dr / (r Lambda(r))``."""
    if g.num_vertices < 2:
        raise SingletonGraph("rho needs at least two vertices")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    curve = spectral_profile(g)
    lower, upper = 4.0 * curve.pi_star, 4.0 / epsilon
    total, bands = integrate_profile(curve, lower, upper)
    dyadic = math.fsum(1.0 / s.lam for s in rayleigh_sets(g))
    return RhoResult(total, float(epsilon), lower, upper, bands, dyadic, curve.pi_star)
