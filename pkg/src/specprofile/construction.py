"""The weighted graphs G_k whose rho exceeds the mixing time by a log log factor.

G_k has ``m = k - ceil(log2 k) + 1`` pieces ``H_l`` (``l = ceil(log2 k) .. k``),
each a product ``A_l x B_l`` of ``2^(2^k)`` vertices, with

* weight ``k 2^-k / n`` between any two vertices (``n = m 2^(2^k)``),
* an extra ``2^(l-k) / |H_l|`` inside ``H_l``,
* an extra ``1 / |A_l|`` between vertices sharing the ``B_l`` coordinate,
* an extra ``1 - 2^(l-k)`` on every self-loop,

so every vertex weighs ``2 + k 2^-k``. One step of the walk is a cascade of
three coins: jump uniformly in G, else uniformly in ``H_l``, else uniformly in
the copy of ``A_l`` through the current vertex, else stay.

From a start ``v`` in ``H_l`` the vertex classes ``{v}``, ``copy(v) - v``,
``H_l - copy(v)`` and the other pieces see class-uniform weights, so the walk
lumps exactly onto at most ``m + 2`` states. All probabilities are exact
rationals; large quantities are carried as mpmath floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np
from mpmath import mpf

from .bigvalue import DEFAULT_PREC, big, expm_stochastic
from .errors import BadPieceLabel, KOutOfRange, KTooLargeForDense, KTooSmall
from .graph import WeightedGraph, from_weight_matrix

__all__ = [
    "ConstructionParams",
    "LumpedChain",
    "WalkStats",
    "ConstructionTau",
    "RhoLowerBound",
    "ceil_log2",
    "construction_sizes",
    "edge_weights",
    "vertex_weight",
    "three_coin_probs",
    "build_gk_dense",
    "vertex_index",
    "start_classes",
    "one_step_law",
    "one_step_vertex_law",
    "lumped_chain",
    "lumped_heat_kernel",
    "class_law",
    "construction_deviation",
    "tau_construction",
    "rho_lower_bound",
    "simulate_walk",
]

DENSE_K = 3
TAU_K_MAX = 16


def ceil_log2(k: int) -> int:
    return (k - 1).bit_length()


@dataclass(frozen=True)
class ConstructionParams:
    k: int
    pieces: tuple[int, ...]
    a_size: dict
    b_size: dict
    h_size: int
    n: int

    @property
    def m(self) -> int:
        return len(self.pieces)


@lru_cache(maxsize=None)
def construction_sizes(k: int) -> ConstructionParams:
    if k < 3:
        raise KTooSmall(f"the construction needs k >= 3, got {k}")
    pieces = tuple(range(ceil_log2(k), k + 1))
    h = 2 ** (2**k)
    a_size = {l: 2 ** (2**k - 2**l) for l in pieces}
    b_size = {l: 2 ** (2**l) for l in pieces}
    return ConstructionParams(k, pieces, a_size, b_size, h, len(pieces) * h)


def _check_piece(k: int, l: int) -> ConstructionParams:
    params = construction_sizes(k)
    if l not in params.pieces:
        raise BadPieceLabel(f"piece label {l} not in {params.pieces[0]}..{k}")
    return params


def edge_weights(k: int, l: int) -> dict[str, Fraction]:
    """Exact weights seen from a vertex of ``H_l``, by pair type."""
    p = _check_piece(k, l)
    cross = Fraction(k, 2**k) / p.n
    diff_b = Fraction(2**l, 2**k) / p.h_size + cross
    same_b = Fraction(1, p.a_size[l]) + diff_b
    loop = (1 - Fraction(2**l, 2**k)) + same_b
    return {"cross": cross, "diff_b": diff_b, "same_b": same_b, "self": loop}


def vertex_weight(k: int, l: int) -> Fraction:
    """Total weight of a vertex in ``H_l``, summed exactly over its pairs."""
    p = _check_piece(k, l)
    w = edge_weights(k, l)
    a, h = p.a_size[l], p.h_size
    return (
        w["self"]
        + (a - 1) * w["same_b"]
        + (h - a) * w["diff_b"]
        + (p.n - h) * w["cross"]
    )


def three_coin_probs(k: int, l: int) -> tuple[Fraction, Fraction, Fraction]:
    _check_piece(k, l)
    small = Fraction(k, 2**k)
    p1 = small / (2 + small)
    p2 = Fraction(2**l, 2 ** (k + 1))
    p3 = 1 / (2 - Fraction(2**l, 2**k))
    return p1, p2, p3


# ---------------------------------------------------------------- dense G_3


def vertex_index(k: int, l: int, a: int, b: int) -> int:
    p = _check_piece(k, l)
    return p.pieces.index(l) * p.h_size + a * p.b_size[l] + b


def build_gk_dense(k: int = DENSE_K) -> WeightedGraph:
    """Materialize G_k as an ordinary weighted graph (only k = 3: 512 vertices)."""
    if k < 3:
        raise KTooSmall(f"the construction needs k >= 3, got {k}")
    if k > DENSE_K:
        raise KTooLargeForDense(f"G_{k} has {construction_sizes(k).n} vertices")
    p = construction_sizes(k)
    h = p.h_size
    w = np.full((p.n, p.n), float(edge_weights(k, p.pieces[0])["cross"]))
    for pos, l in enumerate(p.pieces):
        ew = {key: float(v) for key, v in edge_weights(k, l).items()}
        block = slice(pos * h, (pos + 1) * h)
        sub = np.full((h, h), ew["diff_b"])
        b_of = np.arange(h) % p.b_size[l]
        sub[b_of[:, None] == b_of[None, :]] = ew["same_b"]
        np.fill_diagonal(sub, ew["self"])
        w[block, block] = sub
    g = from_weight_matrix(w)
    target = 2 + k / 2**k
    if np.max(np.abs(g.vertex_weights - target)) > 1e-12:
        raise ArithmeticError("vertex weights of the dense construction are not constant")
    return g


def start_classes(k: int, l: int, a: int = 0, b: int = 0) -> dict[str, np.ndarray]:
    """Vertex indices of each lumping class for the start ``(a, b)`` in ``H_l`` (dense k only)."""
    p = _check_piece(k, l)
    if k > DENSE_K:
        raise KTooLargeForDense("vertex-level classes only exist for the dense instance")
    pos = p.pieces.index(l)
    base = pos * p.h_size
    v = vertex_index(k, l, a, b)
    local = np.arange(p.h_size)
    same_copy = base + local[local % p.b_size[l] == b]
    out = {"C0": np.array([v])}
    c1 = same_copy[same_copy != v]
    if c1.size:
        out["C1"] = c1
    out["C2"] = base + local[local % p.b_size[l] != b]
    for j_pos, j in enumerate(p.pieces):
        if j != l:
            out[f"H{j}"] = j_pos * p.h_size + local
    return out


# ---------------------------------------------------------------- one step


def _labels(p: ConstructionParams, l: int) -> list[str]:
    labels = ["C0"]
    if p.a_size[l] > 1:
        labels.append("C1")
    labels.append("C2")
    labels += [f"H{j}" for j in p.pieces if j != l]
    return labels


def _class_sizes(p: ConstructionParams, l: int) -> dict[str, int]:
    a = p.a_size[l]
    sizes = {"C0": 1, "C1": a - 1, "C2": p.h_size - a}
    sizes.update({f"H{j}": p.h_size for j in p.pieces if j != l})
    return {lab: sizes[lab] for lab in _labels(p, l)}


def _coin_step(k: int, l: int, source: str) -> dict[str, Fraction]:
    """Class law after one coin cascade from any vertex of class ``source``."""
    p = construction_sizes(k)
    sizes = _class_sizes(p, l)
    out = {lab: Fraction(0) for lab in sizes}
    here = l if source in ("C0", "C1", "C2") else int(source[1:])
    p1, p2, p3 = three_coin_probs(k, here)

    # xi_1: uniform over G
    for lab, size in sizes.items():
        out[lab] += p1 * Fraction(size, p.n)
    rest = 1 - p1
    # xi_2: uniform over the current piece
    if here == l:
        for lab in ("C0", "C1", "C2"):
            if lab in sizes:
                out[lab] += rest * p2 * Fraction(sizes[lab], p.h_size)
    else:
        out[source] += rest * p2
    rest *= 1 - p2
    # xi_3: uniform over the A-copy through the current vertex
    if source in ("C0", "C1"):
        a = p.a_size[l]
        out["C0"] += rest * p3 * Fraction(1, a)
        if "C1" in sizes:
            out["C1"] += rest * p3 * Fraction(a - 1, a)
    else:
        out[source] += rest * p3
    # no coin succeeded
    out[source] += rest * (1 - p3)
    return out


def one_step_law(k: int, l: int) -> dict[str, Fraction]:
    """Exact one-step class distribution from a start vertex in ``H_l``."""
    _check_piece(k, l)
    return _coin_step(k, l, "C0")


def one_step_vertex_law(k: int, u: int) -> np.ndarray:
    """One coin cascade from vertex ``u`` of the dense instance, as a vertex distribution."""
    if k > DENSE_K:
        raise KTooLargeForDense("vertex-level laws only exist for the dense instance")
    p = construction_sizes(k)
    pos, local = divmod(u, p.h_size)
    l = p.pieces[pos]
    p1, p2, p3 = (float(x) for x in three_coin_probs(k, l))
    law = np.full(p.n, p1 / p.n)
    block = slice(pos * p.h_size, (pos + 1) * p.h_size)
    law[block] += (1 - p1) * p2 / p.h_size
    b = local % p.b_size[l]
    copy = pos * p.h_size + np.arange(b, p.h_size, p.b_size[l])
    law[copy] += (1 - p1) * (1 - p2) * p3 / p.a_size[l]
    law[u] += (1 - p1) * (1 - p2) * (1 - p3)
    return law


# ---------------------------------------------------------------- lumped chain


@dataclass(frozen=True)
class LumpedChain:
    k: int
    l: int
    labels: tuple[str, ...]
    sizes: tuple[int, ...]
    matrix: tuple[tuple[Fraction, ...], ...]  # one-step transition between classes

    @property
    def generator(self) -> list[list[Fraction]]:
        return [
            [v - (1 if i == j else 0) for j, v in enumerate(row)]
            for i, row in enumerate(self.matrix)
        ]

    def index(self, label: str) -> int:
        return self.labels.index(label)


def lumped_chain(k: int, l: int) -> LumpedChain:
    p = _check_piece(k, l)
    sizes = _class_sizes(p, l)
    labels = tuple(sizes)
    rows = []
    for src in labels:
        step = _coin_step(k, l, src)
        rows.append(tuple(step[lab] for lab in labels))
    return LumpedChain(k, l, labels, tuple(sizes.values()), tuple(rows))


def lumped_heat_kernel(chain: LumpedChain, t, prec: int | None = None) -> mpmath.matrix:
    """Class-to-class semigroup ``exp(t (P - I))`` of a lumped chain.

    The singleton class carries mass of order ``1/n = 2^-(2^k)``; the default
    precision leaves ``DEFAULT_PREC`` bits beyond that.
    """
    if prec is None:
        prec = 2**chain.k + DEFAULT_PREC
    return expm_stochastic(chain.matrix, t, prec)


# ---------------------------------------------------------------- closed form


def class_law(k: int, l: int, t) -> dict[str, mpf]:
    """Class masses at time ``t`` from a start in ``H_l``, via the coin events.

    The three coins are independent Poisson streams while the walk is in
    ``H_l``; a jump of the first kind leaves the walk at ``pi`` for good and
    the first coin's rate does not depend on the piece. Conditioning on which
    streams have fired by time ``t`` gives the law in closed form. Must be
    called inside an mpmath precision context wide enough for the caller.
    """
    p = _check_piece(k, l)
    p1, p2, p3 = three_coin_probs(k, l)
    r2 = (1 - p1) * p2
    r3 = (1 - p1) * (1 - p2) * p3
    t = big(t)
    e1 = mpmath.exp(-big(p1) * t)
    e2 = mpmath.exp(-big(r2) * t)
    e3 = mpmath.exp(-big(r3) * t)
    n, h, a = big(p.n), big(p.h_size), big(p.a_size[l])
    sizes = _class_sizes(p, l)

    uniform_g = 1 - e1
    uniform_h = e1 * (1 - e2)
    uniform_copy = e1 * e2 * (1 - e3)
    stay = e1 * e2 * e3
    out = {}
    for lab, size in sizes.items():
        size = big(size)
        mass = uniform_g * size / n
        if lab in ("C0", "C1", "C2"):
            mass += uniform_h * size / h
        if lab in ("C0", "C1"):
            mass += uniform_copy * size / a
        if lab == "C0":
            mass += stay
        out[lab] = mass
    return out


def _class_deviations(k: int, l: int, t) -> dict[str, mpf]:
    """Relative deviation ``P(class) / (|class| / n) - 1`` per class, in closed form.

    Expanded so that no term is formed as a difference of nearly equal
    quantities near stationarity.
    """
    p = _check_piece(k, l)
    p1, p2, p3 = three_coin_probs(k, l)
    r2 = (1 - p1) * p2
    r3 = (1 - p1) * (1 - p2) * p3
    t = big(t)
    e1 = mpmath.exp(-big(p1) * t)
    e2 = mpmath.exp(-big(r2) * t)
    e3 = mpmath.exp(-big(r3) * t)
    m = big(p.m)
    n_over_a = m * big(p.b_size[l])
    n = big(p.n)
    in_h = m * (1 - e2) - 1
    out = {"C2": e1 * in_h}
    if p.a_size[l] > 1:
        out["C1"] = e1 * (in_h + e2 * (1 - e3) * n_over_a)
        out["C0"] = e1 * (in_h + e2 * (1 - e3) * n_over_a + e2 * e3 * n)
    else:
        # the copy is {v}: a third-coin jump is a stay
        out["C0"] = e1 * (in_h + e2 * n)
    if p.m > 1:
        out["other"] = -e1
    return out


def construction_deviation(k: int, t, *, piece: int | None = None) -> mpf:
    """``sup |H_t(x, y) / pi(y) - 1|`` over G_k (or over starts in one piece)."""
    p = construction_sizes(k)
    pieces = p.pieces if piece is None else (piece,)
    with mpmath.workprec(DEFAULT_PREC):
        return max(abs(v) for l in pieces for v in _class_deviations(k, l, t).values())


@dataclass
class ConstructionTau:
    k: int
    epsilon: float
    tau: mpf
    bracket: tuple[mpf, mpf]
    per_piece: dict[int, mpf] = field(default_factory=dict)
    method: str = "closed"

    def __float__(self) -> float:
        return float(self.tau)


def _bisect_mp(fn, eps, lo, hi, rtol):
    while hi - lo > rtol * hi:
        mid = (lo + hi) / 2
        if fn(mid) > eps:
            lo = mid
        else:
            hi = mid
    return lo, hi


def _expm_deviation(k: int, l: int, t) -> mpf:
    chain = lumped_chain(k, l)
    prec = 2**k + DEFAULT_PREC
    ht = lumped_heat_kernel(chain, t, prec)
    n = construction_sizes(k).n
    with mpmath.workprec(prec):
        return max(
            abs(ht[0, j] * n / size - 1) for j, size in enumerate(chain.sizes)
        )


def tau_construction(
    k: int,
    epsilon: float = 0.5,
    *,
    method: str = "closed",
    rtol: float = 1e-12,
) -> ConstructionTau:
    """Exact uniform mixing time of G_k for ``3 <= k <= 16``.

    ``method="closed"`` evaluates the lumped semigroup through the coin-event
    formula (cheap at any k). ``method="expm"`` exponentiates the lumped
    transition matrix directly; its precision must cover ``2^k`` bits, so it is
    limited to ``k <= 7`` and serves as a cross-check.
    """
    if not 3 <= k <= TAU_K_MAX:
        raise KOutOfRange(f"tau_construction supports 3 <= k <= {TAU_K_MAX}, got {k}")
    if method not in ("closed", "expm"):
        raise ValueError(f"unknown method {method!r}")
    if method == "expm" and k > 7:
        raise KOutOfRange("the matrix-exponential route is limited to k <= 7")
    p = construction_sizes(k)
    eps = mpf(epsilon)

    def piece_dev(l):
        if method == "closed":
            return lambda t: construction_deviation(k, t, piece=l)
        return lambda t: _expm_deviation(k, l, t)

    with mpmath.workprec(DEFAULT_PREC):
        per_piece = {}
        brackets = {}
        for l in p.pieces:
            fn = piece_dev(l)
            hi = mpf(1)
            while fn(hi) > eps:
                hi *= 2
            lo = hi / 2 if fn(hi / 2) > eps else mpf(0)
            # scan the dyadic bracket for the last crossing; per-start curves need not be monotone
            ts = [lo + (hi - lo) * i / 64 for i in range(65)]
            above = [i for i, tt in enumerate(ts) if fn(tt) > eps]
            j = above[-1] if above else 0
            lo_l, hi_l = _bisect_mp(fn, eps, ts[j], ts[min(j + 1, 64)], rtol)
            per_piece[l] = hi_l
            brackets[l] = (lo_l, hi_l)
        worst = max(per_piece, key=lambda l: per_piece[l])
        return ConstructionTau(k, float(epsilon), per_piece[worst], brackets[worst], per_piece, method)


# ---------------------------------------------------------------- rho lower bound


@dataclass
class RhoLowerBound:
    k: int
    value: mpf
    bands: list[dict] = field(default_factory=list)

    def __float__(self) -> float:
        return float(self.value)


def rho_lower_bound(k: int, epsilon: float = 0.5) -> RhoLowerBound:
    """Certified lower bound on rho(G_k) from the test sets ``A_l x {pt}``.

    For each piece the set has measure ``1 / (m 2^(2^l))`` and, through the
    indicator test function and the variance sandwich,
    ``Lambda(r) <= lambda(set) <= conductance / (1 - measure)`` for every
    ``r`` at or above that measure. The integrand is therefore at least
    ``2 / (r * bound)`` on the band from the set's measure to
    ``1 / (m 2^(2^(l-1)))``; bands are clipped to ``[4 pi_*, 4 / epsilon]``.
    """
    p = construction_sizes(k)
    small = Fraction(k, 2**k)
    w = 2 + small
    bands = []
    with mpmath.workprec(DEFAULT_PREC):
        lower = big(Fraction(4, p.n))
        upper = big(Fraction(4)) / mpf(epsilon)
        total = mpf(0)
        for l in p.pieces:
            a = p.a_size[l]
            boundary = (p.h_size - a) * (Fraction(2**l, 2**k) / p.h_size + small / p.n) + (
                p.n - p.h_size
            ) * small / p.n
            phi = boundary / w
            lam_ub = phi / (1 - Fraction(a, p.n))
            r_from = 1 / (big(p.m) * mpf(2) ** (2**l))
            r_to = 1 / (big(p.m) * mpf(2) ** (2 ** (l - 1)))
            lo, hi = max(r_from, lower), min(r_to, upper)
            contribution = 2 * (mpmath.log(hi) - mpmath.log(lo)) / big(lam_ub) if hi > lo else mpf(0)
            total += contribution
            bands.append(
                {
                    "l": l,
                    "r_from": lo,
                    "r_to": hi,
                    "conductance": phi,
                    "lambda_ub": lam_ub,
                    "contribution": contribution,
                }
            )
    return RhoLowerBound(k, total, bands)


# ---------------------------------------------------------------- Monte Carlo


@dataclass
class WalkStats:
    k: int
    l: int
    steps: int | None
    time: float | None
    replicas: int
    seed: int
    survival: dict  # event name -> empirical P(event has not happened)
    stderr: dict
    exact: dict
    tail_bounds: dict
    final_classes: dict

    def within(self, sigmas: float = 3.0) -> dict:
        return {
            key: abs(self.survival[key] - self.exact[key]) <= sigmas * self.stderr[key]
            for key in self.survival
        }

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "l": self.l,
            "steps": self.steps,
            "time": self.time,
            "replicas": self.replicas,
            "seed": self.seed,
            "survival": self.survival,
            "stderr": self.stderr,
            "exact": self.exact,
            "tail_bounds": self.tail_bounds,
            "final_classes": self.final_classes,
        }


def simulate_walk(
    k: int,
    l_start: int,
    steps: int | None = None,
    seed: int = 0,
    replicas: int = 100_000,
    *,
    time: float | None = None,
    chunk: int = 50_000,
) -> WalkStats:
    """Monte Carlo of the coin cascade, recording the first time each coin fires.

    Give ``steps`` for the discrete chain, or ``time`` for the Poissonized walk
    in which each replica performs a Poisson(``time``) number of steps.
    Replicas are split into chunks, each driven by its own Philox stream, so
    the output depends only on ``seed`` and ``replicas``.
    """
    from .spectral import philox

    if (steps is None) == (time is None):
        raise ValueError("give exactly one of steps or time")
    if steps is not None and steps < 1:
        raise ValueError("steps must be at least 1")
    chain = lumped_chain(k, l_start)
    p = construction_sizes(k)
    labels = chain.labels
    n_cls = len(labels)
    sizes = np.array([float(Fraction(s, p.n)) for s in chain.sizes])
    cum_g = np.cumsum(sizes)
    cum_g[-1] = 1.0
    piece_of = np.array([l_start if lab.startswith("C") else int(lab[1:]) for lab in labels])
    probs = {l: [float(x) for x in three_coin_probs(k, l)] for l in p.pieces}
    p1 = probs[l_start][0]
    p2_of = np.array([probs[j][1] for j in piece_of])
    p3_of = np.array([probs[j][2] for j in piece_of])
    h_frac = {
        "C0": 1 / p.h_size,
        "C1": (p.a_size[l_start] - 1) / p.h_size,
    }
    i_c0 = chain.index("C0")
    i_c1 = chain.index("C1") if "C1" in labels else -1
    i_c2 = chain.index("C2")
    a_inv = 1.0 / p.a_size[l_start]

    first = {name: [] for name in ("xi1", "xi2", "xi3")}
    finals = np.zeros(n_cls, dtype=np.int64)
    horizons = []
    for c, lo in enumerate(range(0, replicas, chunk)):
        size = min(chunk, replicas - lo)
        rng = philox(seed, c)
        if time is not None:
            horizon = rng.poisson(time, size=size)
        else:
            horizon = np.full(size, steps)
        horizons.append(horizon)
        state = np.full(size, i_c0)
        t1 = np.full(size, np.iinfo(np.int64).max)
        t2 = t1.copy()
        t3 = t1.copy()
        for step in range(1, int(horizon.max(initial=0)) + 1):
            live = horizon >= step
            u = rng.random((4, size))
            ev1 = live & (u[0] < p1)
            ev2 = live & ~ev1 & (u[1] < p2_of[state])
            ev3 = live & ~ev1 & ~ev2 & (u[2] < p3_of[state])
            t1 = np.where(ev1 & (t1 > step), step, t1)
            t2 = np.where(ev2 & (t2 > step), step, t2)
            t3 = np.where(ev3 & (t3 > step), step, t3)
            new = state.copy()
            new[ev1] = np.searchsorted(cum_g, u[3][ev1], side="right")
            in_h = piece_of[state] == l_start
            j2 = ev2 & in_h
            pick = u[3][j2]
            dest = np.full(pick.shape, i_c2)
            dest[pick < h_frac["C0"] + h_frac["C1"]] = i_c1 if i_c1 >= 0 else i_c2
            dest[pick < h_frac["C0"]] = i_c0
            new[j2] = dest
            j3 = ev3 & ((state == i_c0) | (state == i_c1))
            if i_c1 >= 0:
                new[j3] = np.where(u[3][j3] < a_inv, i_c0, i_c1)
            else:
                new[j3] = i_c0
            state = new
        first["xi1"].append(t1)
        first["xi2"].append(t2)
        first["xi3"].append(t3)
        finals += np.bincount(state, minlength=n_cls)

    t1 = np.concatenate(first["xi1"])
    t2 = np.concatenate(first["xi2"])
    t3 = np.concatenate(first["xi3"])
    horizon = np.concatenate(horizons)
    events = {
        "tau1": t1 > horizon,
        "tau12": np.minimum(t1, t2) > horizon,
        "tau123": np.minimum(np.minimum(t1, t2), t3) > horizon,
    }
    survival = {key: float(v.mean()) for key, v in events.items()}

    f1, f2, f3 = three_coin_probs(k, l_start)
    q = {
        "tau1": 1 - f1,
        "tau12": (1 - f1) * (1 - f2),
        "tau123": (1 - f1) * (1 - f2) * (1 - f3),
    }
    # per-step factors of the simple tail bounds used in the mixing argument
    q_bound = {
        "tau1": 1 - Fraction(k, 2**k) / 3,
        "tau12": 1 - f2,
        "tau123": 1 - f3,
    }

    def power(factor: Fraction) -> float:
        if time is not None:
            return math.exp(-time * float(1 - factor))
        return float(factor) ** steps

    exact = {key: power(v) for key, v in q.items()}
    bounds = {key: power(v) for key, v in q_bound.items()}
    stderr = {key: math.sqrt(max(v * (1 - v), 0.0) / replicas) for key, v in exact.items()}
    return WalkStats(
        k,
        l_start,
        steps,
        time,
        replicas,
        seed,
        survival,
        stderr,
        exact,
        bounds,
        {lab: int(c) for lab, c in zip(labels, finals)},
    )
