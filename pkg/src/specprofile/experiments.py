"""Verification suites: tau <= rho, the log log ratio, the G_k trend and the tree demo."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

from . import calibration as cal
from .construction import (
    build_gk_dense,
    construction_sizes,
    rho_lower_bound,
    tau_construction,
)
from .errors import KOutOfRange
from .graph import WeightedGraph, build_graph
from .mixing import tau_inf, tau_inf_from
from .profile import rayleigh_sets, rho
from .rough_isometry import binary_tree
from .spectral import philox

__all__ = [
    "SuiteGraph",
    "TheoremReport",
    "complete_graph",
    "path_graph",
    "cycle_graph",
    "star_graph",
    "random_graph",
    "default_suite",
    "verify_gmt",
    "thm1_report",
    "thm2_report",
    "tree_demo",
]

GMT_SLACK = 1e-9


@dataclass(frozen=True)
class SuiteGraph:
    name: str
    graph: WeightedGraph


@dataclass
class TheoremReport:
    name: str
    rows: list[dict]
    aggregate: dict = field(default_factory=dict)
    flags: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.flags.values())

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "flags": self.flags,
            "aggregate": self.aggregate,
            "rows": self.rows,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        if not self.rows:
            return ""
        cols = list(self.rows[0])
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(cols)
        for row in self.rows:
            writer.writerow([_fmt(row[c]) for c in cols])
        return buf.getvalue()


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.12g}"
    return v


# ---------------------------------------------------------------- suite


def complete_graph(n: int) -> WeightedGraph:
    return build_graph(n, [(i, j, 1.0) for i in range(n) for j in range(i + 1, n)])


def path_graph(n: int) -> WeightedGraph:
    return build_graph(n, [(i, i + 1, 1.0) for i in range(n - 1)])


def cycle_graph(n: int) -> WeightedGraph:
    return build_graph(n, [(i, (i + 1) % n, 1.0) for i in range(n)])


def star_graph(n: int) -> WeightedGraph:
    return build_graph(n, [(0, i, 1.0) for i in range(1, n)])


def random_graph(seed: int, index: int, max_n: int = 12) -> WeightedGraph:
    """A connected graph: random recursive tree plus extra edges, weights in [0.5, 2]."""
    rng = philox(seed, index)
    n = int(rng.integers(4, max_n + 1))
    pairs = {(int(rng.integers(0, i)), i) for i in range(1, n)}
    density = rng.uniform(0.1, 0.5)
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < density:
                pairs.add((i, j))
    pairs = sorted(pairs)
    weights = rng.uniform(0.5, 2.0, size=len(pairs))
    return build_graph(n, [(u, v, float(w)) for (u, v), w in zip(pairs, weights)])


def default_suite(seed: int = 0, num_random: int = 20) -> list[SuiteGraph]:
    suite = [SuiteGraph(f"K{n}", complete_graph(n)) for n in range(2, 9)]
    suite += [SuiteGraph(f"P{n}", path_graph(n)) for n in range(3, 13)]
    suite += [SuiteGraph(f"C{n}", cycle_graph(n)) for n in range(3, 13)]
    suite.append(SuiteGraph("S8", star_graph(8)))
    suite += [SuiteGraph(f"R{i}", random_graph(seed, i)) for i in range(num_random)]
    return suite


def _loglog(pi_star: float) -> float:
    return math.log2(math.log2(1.0 / pi_star))


# ---------------------------------------------------------------- reports


def verify_gmt(suite: list[SuiteGraph], epsilon: float = 0.5) -> TheoremReport:
    """tau(eps) <= rho(eps) on every graph; no unknown constant is involved."""
    rows = []
    for item in suite:
        g = item.graph
        t = tau_inf(g, epsilon).tau_inf
        r = rho(g, epsilon)
        rows.append(
            {
                "graph": item.name,
                "n": g.num_vertices,
                "tau": t,
                "rho": r.rho,
                "slack": r.rho / t if t > 0 else math.inf,
                "holds": bool(t <= r.rho + GMT_SLACK),
            }
        )
    failures = [row["graph"] for row in rows if not row["holds"]]
    return TheoremReport(
        "verify-gmt",
        rows,
        {"failures": failures, "min_slack": min(row["slack"] for row in rows)},
        {"all_hold": not failures},
    )


def thm1_report(suite: list[SuiteGraph], epsilon: float = 0.5) -> TheoremReport:
    """rho / (tau * max(1, log2 log2 1/pi_*)) and the dyadic chain ``tau lambda(A_k) / k``."""
    rows = []
    for item in suite:
        g = item.graph
        t = tau_inf(g, epsilon).tau_inf
        r = rho(g, epsilon)
        guard = max(1.0, _loglog(r.pi_star))
        sets = [s for s in rayleigh_sets(g) if s.k >= 2]
        chain = min((t * s.lam / s.k for s in sets), default=math.nan)
        rows.append(
            {
                "graph": item.name,
                "n": g.num_vertices,
                "tau": t,
                "rho": r.rho,
                "pi_star": r.pi_star,
                "loglog_guard": guard,
                "ratio": r.rho / (t * guard),
                "dyadic_sum": r.dyadic_sum,
                "rho_over_dyadic": r.rho / r.dyadic_sum,
                "min_tau_lam_over_k": chain,
            }
        )
    ratios = [row["ratio"] for row in rows]
    chains = [row["min_tau_lam_over_k"] for row in rows if not math.isnan(row["min_tau_lam_over_k"])]
    aggregate = {
        "max_ratio": max(ratios),
        "min_ratio": min(ratios),
        "threshold": cal.THM1_MAX_RATIO,
        "min_tau_lam_over_k": min(chains) if chains else None,
        "rho_over_dyadic_range": [
            min(row["rho_over_dyadic"] for row in rows),
            max(row["rho_over_dyadic"] for row in rows),
        ],
    }
    flags = {
        "ratio_below_threshold": max(ratios) <= cal.THM1_MAX_RATIO,
        "ratios_finite_positive": all(math.isfinite(x) and x > 0 for x in ratios),
        "dyadic_chain_positive": all(c > 0 for c in chains),
    }
    return TheoremReport("thm1", rows, aggregate, flags)


def thm2_report(k_max: int = 12, epsilon: float = 0.5, *, dense_check: bool = True) -> TheoremReport:
    """Exact tau and certified rho lower bound for G_3 .. G_{k_max}."""
    if not 3 <= k_max <= 12:
        raise KOutOfRange(f"k_max must lie in 3..12, got {k_max}")
    rows = []
    for k in range(3, k_max + 1):
        t = float(tau_construction(k, epsilon).tau)
        lb = float(rho_lower_bound(k, epsilon).value)
        rows.append(
            {
                "k": k,
                "tau": t,
                "rho_lb": lb,
                "ratio": lb / t,
                "ratio_over_k": lb / t / k,
                "loglog_n": math.log2(2**k + math.log2(construction_sizes(k).m)),
                "tau_over_2k1": t / 2 ** (k + 1),
            }
        )
    ratios = [row["ratio"] for row in rows]
    base = rows[0]["ratio_over_k"]
    flags = {
        "tau_bound": all(
            row["tau"] <= 2 ** (row["k"] + cal.THM2_TAU_EXPONENT_SLACK) for row in rows
        ),
        "ratio_increasing": all(b > a for a, b in zip(ratios, ratios[1:])),
        "ratio_over_k_floor": all(
            row["ratio_over_k"] >= cal.THM2_SLOPE_FRACTION * base for row in rows
        ),
    }
    aggregate = {"ratio_over_k_at_3": base, "min_ratio_over_k": min(r["ratio_over_k"] for r in rows)}
    if dense_check:
        dense = tau_inf(build_gk_dense(3), epsilon).tau_inf
        rel = abs(dense - rows[0]["tau"]) / dense
        aggregate["k3_dense_tau"] = dense
        aggregate["k3_dense_rel_error"] = rel
        flags["k3_matches_dense"] = rel <= 1e-6
    return TheoremReport("thm2", rows, aggregate, flags)


def tree_demo(
    h_max: int = 9,
    epsilon: float = cal.TREE_EPSILON,
    *,
    h_min: int = 4,
    enforce: bool = True,
) -> TheoremReport:
    """Mixing from the root versus from a child of the root of a binary tree.

    The child sits one step into a subtree that is a bottleneck for the
    walk, so its mixing time roughly doubles with each level, while from the
    root both halves fill at the same rate.
    """
    if not 4 <= h_max <= 10:
        raise ValueError(f"h_max must lie in 4..10, got {h_max}")
    rows = []
    prev = None
    for h in range(h_min, h_max + 1):
        g = binary_tree(h)
        root = tau_inf_from(g, 0, epsilon)
        child = tau_inf_from(g, 1, epsilon)
        row = {
            "h": h,
            "n": g.num_vertices,
            "tau_root": root,
            "tau_child": child,
            "child_over_root": child / root,
            "child_growth": child / prev[1] if prev else math.nan,
            "root_growth": root / prev[0] if prev else math.nan,
        }
        rows.append(row)
        prev = (root, child)
    late = [r for r in rows if r["h"] >= cal.TREE_FROM_HEIGHT]
    flags = {
        "child_slower": all(r["tau_child"] > r["tau_root"] for r in rows),
        "separation_grows": all(
            b["child_over_root"] > a["child_over_root"] for a, b in zip(rows, rows[1:])
        ),
    }
    if enforce:
        flags["child_growth_exponential"] = all(r["child_growth"] >= cal.TREE_GAMMA_EXP for r in late)
        flags["root_growth_linear"] = all(r["root_growth"] <= cal.TREE_GAMMA_LIN for r in late)
    aggregate = {
        "epsilon": epsilon,
        "gamma_exp": cal.TREE_GAMMA_EXP,
        "gamma_lin": cal.TREE_GAMMA_LIN,
        "from_height": cal.TREE_FROM_HEIGHT,
    }
    return TheoremReport("tree-demo", rows, aggregate, flags)

