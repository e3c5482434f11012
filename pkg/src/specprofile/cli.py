"""Command line driver: ``python -m specprofile <subcommand> [flags]``.

Exit status is 0 on success, 1 when a verification report fails and 2 on bad
input. Errors are printed to stderr as ``error: <Code>: <message>``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import calibration as cal
from .bigvalue import big_to_json
from .construction import build_gk_dense, construction_sizes, simulate_walk
from .errors import BadInputFile, SpecProfileError, UnknownSubcommand
from .experiments import default_suite, SuiteGraph, thm1_report, thm2_report, tree_demo, verify_gmt
from .graph import dump_graph, graph_to_dict, is_connected, load_graph
from .mixing import deviation_csv, tau_inf, tau_inf_from
from .profile import rho, spectral_profile
from .rough_isometry import check_rough_isometry, load_map, path_metric

__all__ = ["main", "run", "build_parser"]

SUBCOMMANDS = (
    "stationary",
    "profile",
    "rho",
    "tau",
    "tau-from",
    "verify-gmt",
    "thm1",
    "construct",
    "thm2",
    "simulate",
    "tree-demo",
    "rough-iso",
)

# report-style commands print a table by default
_CSV_DEFAULT = {"verify-gmt", "thm1", "thm2", "tree-demo"}


class UsageError(SpecProfileError, ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        if "invalid choice" in message and "command" in message:
            raise UnknownSubcommand(message)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="specprofile", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_text, *, graph=False, epsilon=None):
        p = sub.add_parser(name, help=help_text)
        if graph:
            p.add_argument("--input", required=True, help="graph JSON file")
        if epsilon is not None:
            p.add_argument("--epsilon", type=float, default=epsilon)
        p.add_argument("--format", choices=("json", "csv"))
        p.add_argument("--out", help="write the report here instead of stdout")
        return p

    add("stationary", "stationary measure and vertex weights", graph=True)
    add("profile", "exact spectral profile", graph=True)
    add("rho", "the profile integral", graph=True, epsilon=0.5)
    add("tau", "uniform mixing time", graph=True, epsilon=0.5)
    p = add("tau-from", "mixing time from one start", graph=True, epsilon=0.5)
    p.add_argument("--start", type=int, required=True)
    for name, text in (("verify-gmt", "tau <= rho on a suite"), ("thm1", "rho / (tau log log) on a suite")):
        p = add(name, text, epsilon=0.5)
        p.add_argument("--suite", default="default", help="'default' or a graph JSON file")
        p.add_argument("--input", help="check a single graph instead of the suite")
        p.add_argument("--seed", type=int, default=0, help="seed of the random suite graphs")
    p = add("construct", "write the dense G_k (k = 3 only)")
    p.add_argument("--k", type=int, default=3)
    p = add("thm2", "exact tau and rho lower bound on the G_k family", epsilon=0.5)
    p.add_argument("--kmax", type=int, default=12)
    p = add("simulate", "Monte Carlo of the coin cascade on G_k")
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--start", type=int, help="start piece l (default: smallest)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--steps", type=int, help="discrete steps (default 2^(k+1))")
    p.add_argument("--time", type=float, help="Poissonized mode: continuous time")
    p.add_argument("--replicas", type=int, default=100_000)
    p = add("tree-demo", "root versus child mixing on binary trees", epsilon=cal.TREE_EPSILON)
    p.add_argument("--height", type=int, default=9, help="largest tree height")
    p = add("rough-iso", "check a K-rough isometry")
    p.add_argument(
        "--input", action="append", required=True, help="source graph, then optionally target graph"
    )
    p.add_argument("--map", required=True, help="JSON array of target vertices")
    p.add_argument("--K", type=float, required=True)
    return parser


# ---------------------------------------------------------------- formatting


def _clean(obj):
    """Round floats to 12 significant digits and make the tree JSON-safe."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return None
        return float(f"{x:.12g}")
    return obj


def _json(obj) -> str:
    return json.dumps(_clean(obj), indent=2) + "\n"


def _table(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([f"{v:.12g}" if isinstance(v, float) else v for v in row])
    return buf.getvalue()


# ---------------------------------------------------------------- commands


def _stationary(args, fmt):
    g = load_graph(args.input)
    if fmt == "csv":
        return _table(["vertex", "weight", "pi"], zip(range(g.num_vertices), g.vertex_weights.tolist(), g.pi.tolist())), 0
    return _json(
        {
            "num_vertices": g.num_vertices,
            "connected": is_connected(g),
            "vertex_weights": g.vertex_weights,
            "pi": g.pi,
        }
    ), 0


def _profile(args, fmt):
    curve = spectral_profile(load_graph(args.input))
    if fmt == "csv":
        return _table(["r_from", "r_to", "lambda"], [(a, "" if math.isinf(b) else b, v) for a, b, v in curve.bands()]), 0
    return _json(curve.to_json()), 0


def _rho(args, fmt):
    r = rho(load_graph(args.input), args.epsilon)
    if fmt == "csv":
        return _table(
            ["r_from", "r_to", "lambda", "contribution"],
            [(b.r_from, b.r_to, b.lam, b.contribution) for b in r.bands],
        ), 0
    return _json(r.to_json()), 0


def _tau(args, fmt):
    report = tau_inf(load_graph(args.input), args.epsilon)
    if fmt == "csv":
        return deviation_csv(report), 0
    return _json(report.to_json()), 0


def _tau_from(args, fmt):
    g = load_graph(args.input)
    if not 0 <= args.start < g.num_vertices:
        raise UsageError(f"--start {args.start} outside 0..{g.num_vertices - 1}")
    t = tau_inf_from(g, args.start, args.epsilon)
    if fmt == "csv":
        return _table(["start", "epsilon", "tau"], [(args.start, args.epsilon, t)]), 0
    return _json({"start": args.start, "epsilon": args.epsilon, "tau": t}), 0


def _suite(args) -> list[SuiteGraph]:
    if args.input:
        return [SuiteGraph(Path(args.input).stem, load_graph(args.input))]
    if args.suite == "default":
        return default_suite(args.seed)
    path = Path(args.suite)
    if path.is_file():
        return [SuiteGraph(path.stem, load_graph(path))]
    raise BadInputFile(f"--suite must be 'default' or an existing graph file, got {args.suite!r}")


def _report(report, fmt, extra=None):
    code = 0 if report.passed else 1
    if fmt == "csv":
        return report.to_csv(), code
    body = report.to_json()
    if extra:
        body.update(extra)
    return _json(body), code


def _verify_gmt(args, fmt):
    return _report(verify_gmt(_suite(args), args.epsilon), fmt, {"seed": args.seed})


def _thm1(args, fmt):
    return _report(thm1_report(_suite(args), args.epsilon), fmt, {"seed": args.seed})


def _construct(args, fmt):
    g = build_gk_dense(args.k)
    if fmt == "csv":
        return _table(["u", "v", "w"], g.edges()), 0
    return dump_graph(g) + "\n", 0


def _thm2(args, fmt):
    report = thm2_report(args.kmax, args.epsilon)
    sizes = {
        str(row["k"]): big_to_json(construction_sizes(row["k"]).n) for row in report.rows
    }
    return _report(report, fmt, {"n_k": sizes})


def _simulate(args, fmt):
    k = args.k
    start = args.start if args.start is not None else construction_sizes(k).pieces[0]
    if args.time is not None:
        stats = simulate_walk(k, start, seed=args.seed, replicas=args.replicas, time=args.time)
    else:
        steps = args.steps if args.steps is not None else 2 ** (k + 1)
        stats = simulate_walk(k, start, steps, args.seed, args.replicas)
    if fmt == "csv":
        rows = [
            (key, stats.survival[key], stats.stderr[key], stats.exact[key], stats.tail_bounds[key])
            for key in stats.survival
        ]
        return _table(["event", "empirical", "stderr", "exact", "bound"], rows), 0
    return _json(stats.to_json()), 0


def _tree_demo(args, fmt):
    return _report(tree_demo(args.height, args.epsilon), fmt)


def _rough_iso(args, fmt):
    if len(args.input) > 2:
        raise UsageError("--input takes at most two graphs (source, target)")
    x = path_metric(load_graph(args.input[0]))
    y = path_metric(load_graph(args.input[1])) if len(args.input) == 2 else x
    report = check_rough_isometry(x, y, load_map(args.map), args.K)
    if fmt == "csv":
        w = report.witness or ()
        return _table(["K", "holds", "witness"], [(report.K, report.holds, " ".join(map(str, w)))]), 0
    return _json(report.to_json()), 0


_HANDLERS = {
    "stationary": _stationary,
    "profile": _profile,
    "rho": _rho,
    "tau": _tau,
    "tau-from": _tau_from,
    "verify-gmt": _verify_gmt,
    "thm1": _thm1,
    "construct": _construct,
    "thm2": _thm2,
    "simulate": _simulate,
    "tree-demo": _tree_demo,
    "rough-iso": _rough_iso,
}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        fmt = args.format or ("csv" if args.command in _CSV_DEFAULT else "json")
        text, code = _HANDLERS[args.command](args, fmt)
        if args.out:
            Path(args.out).write_text(text)
        else:
            stdout.write(text)
        return code
    except SpecProfileError as exc:
        stderr.write(f"error: {exc.code}: {exc}\n")
        return 2
    except (OSError, ValueError) as exc:
        stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return 2


def main() -> None:
    sys.exit(run())
