"""Command-line front end.

Every subcommand reads a multiplex edge list (``fit`` reads an ``attack``
table instead) and writes one CSV or JSON table. Exit codes:

    0  success
    1  other error
    2  invalid command line
    3  unreadable or malformed input
    4  lattice resource budget exceeded
    5  metric undefined (e.g. correlation of a constant vector)
"""
from __future__ import annotations

import argparse
import sys
from typing import Sequence

from . import metrics
from .attack import RANKING_SOURCES, AttackPlan, LatticeBudget, fit_trace, run_attack
from .influence import propagate, rank, score_vector
from .lattice import DEFAULT_MAX_CORES, LatticeBudgetExceeded
from .multiplex import NetworkParseError, load_network
from .tables import FORMATS, format_table, format_vector, parse_number, read_table

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_BUDGET = 4
EXIT_UNDEFINED = 5

COLUMNS = {
    "info": ["layer", "node_count", "edge_count", "min_degree", "max_degree", "mean_degree"],
    "decompose": ["level", "vector", "members", "fathers"],
    "rank": ["node_label", "deepest_level", "log_influence", "rank"],
    "assortativity": ["layer_a", "layer_b", "r"],
    "compare": ["baseline", "spearman"],
    "attack": ["mode", "trial", "fraction", "cores_remaining", "cores_pct", "assortativity"],
    "fit": ["mode", "a", "b", "residual", "points", "excluded"],
}


def _positive_int(text):
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _nonneg_int(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return value


def _positive_float(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return value


def _float_list(text):
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _measure_list(text):
    names = tuple(x.strip() for x in text.split(",") if x.strip())
    bad = [m for m in names if m not in metrics.MEASURES]
    if bad or not names:
        raise argparse.ArgumentTypeError(
            f"unknown measure(s) {', '.join(bad) or '(none)'}; choose from {', '.join(metrics.MEASURES)}"
        )
    return names


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", required=True, help="input file")
    common.add_argument("--format", choices=FORMATS, default="csv", help="output format (default csv)")
    common.add_argument("--out", default="-", help="output path, '-' for standard output")
    common.add_argument("--seed", type=int, default=0)

    lattice = argparse.ArgumentParser(add_help=False)
    lattice.add_argument("--max-level", type=_nonneg_int, default=None,
                         help="highest lattice level to enumerate (default: sum of max degrees)")
    lattice.add_argument("--max-cores", type=_positive_int, default=DEFAULT_MAX_CORES)
    lattice.add_argument("--time-budget", type=_positive_float, default=None, help="seconds per lattice")

    eig = argparse.ArgumentParser(add_help=False)
    eig.add_argument("--tolerance", type=_positive_float, default=1e-10)
    eig.add_argument("--max-iters", type=_positive_int, default=10_000)

    parser = argparse.ArgumentParser(prog="mcrank", description="Multiplex core lattice analytics.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("info", parents=[common], help="node, layer, edge counts and degree statistics")
    sub.add_parser("decompose", parents=[common, lattice], help="export the core lattice")
    sub.add_parser("rank", parents=[common, lattice], help="MultiCoreRank table")
    p = sub.add_parser("centrality", parents=[common, eig], help="classical multiplex centralities")
    p.add_argument("--measures", type=_measure_list, default=metrics.MEASURES)
    sub.add_parser("assortativity", parents=[common], help="layer-layer degree correlations")
    sub.add_parser("compare", parents=[common, lattice, eig],
                   help="Spearman correlation of MultiCoreRank with each classical centrality")
    p = sub.add_parser("attack", parents=[common, lattice], help="node-removal attack trace")
    p.add_argument("--mode", choices=("sorted", "random"), default="sorted")
    p.add_argument("--fractions", type=_float_list, default=(0.0, 0.1, 0.2, 0.3, 0.4, 0.5))
    p.add_argument("--trials", type=_positive_int, default=50)
    p.add_argument("--ranking", choices=RANKING_SOURCES, default="multicorerank")
    p.add_argument("--adaptive", action="store_true", help="re-rank survivors before every batch")
    sub.add_parser("fit", parents=[common], help="fit y = a*exp(-b*x) to an attack table")
    return parser


def _budget(args) -> LatticeBudget:
    return LatticeBudget(args.max_level, args.max_cores, args.time_budget)


def _degree_stats(d):
    if not len(d):
        return dict(min_degree=0, max_degree=0, mean_degree=0.0)
    return dict(min_degree=int(d.min()), max_degree=int(d.max()), mean_degree=float(d.mean()))


def cmd_info(net, args):
    rows = []
    for a, label in enumerate(net.layer_labels):
        rows.append(dict(layer=label, node_count=net.node_count, edge_count=net.edge_count(a),
                         **_degree_stats(net.degree_vector(a))))
    rows.append(dict(layer="*", node_count=net.node_count, edge_count=net.edge_count(),
                     **_degree_stats(metrics.degree_centrality(net).aggregate)))
    return rows


def cmd_decompose(net, args):
    lat = _budget(args).build(net)
    labels = net.node_labels
    csv_style = args.format == "csv"
    rows = []
    for core in lat.cores():
        members = sorted(labels[v] for v in core.nodes())
        fathers = sorted(lat.fathers[core.vector])
        rows.append(dict(
            level=core.level,
            vector=format_vector(core.vector) if csv_style else list(core.vector),
            members=members,
            fathers=[format_vector(f) for f in fathers] if csv_style else [list(f) for f in fathers],
        ))
    return rows


def cmd_rank(net, args):
    table = propagate(_budget(args).build(net))
    return [
        dict(node_label=r.label, deepest_level=r.deepest_level,
             log_influence=r.log_influence, rank=r.rank)
        for r in rank(table)
    ]


def cmd_centrality(net, args):
    values = {}
    for m in args.measures:
        kw = {"tolerance": args.tolerance, "max_iters": args.max_iters} if m == "eigenvector" else {}
        values[m] = metrics.centrality(net, m, **kw).aggregate
    rows = []
    for v, label in enumerate(net.node_labels):
        row = {"node_label": label}
        for m in args.measures:
            x = values[m][v]
            row[m] = int(x) if m == "degree" else float(x)
        rows.append(row)
    return rows


def cmd_assortativity(net, args):
    report = metrics.assortativity(net)
    rows = [
        dict(layer_a=net.layer_labels[a], layer_b=net.layer_labels[b], r=r)
        for (a, b), r in report.pairwise.items()
    ]
    rows.append(dict(layer_a="*", layer_b="*", r=report.global_))
    return rows


def compare_scores(net, budget=LatticeBudget(), tolerance=1e-10, max_iters=10_000):
    """Spearman correlation between MultiCoreRank and each classical measure."""
    mcr = score_vector(propagate(budget.build(net)))
    out = {}
    for m in metrics.MEASURES:
        kw = {"tolerance": tolerance, "max_iters": max_iters} if m == "eigenvector" else {}
        out[m] = metrics.spearman(mcr, metrics.centrality(net, m, **kw).aggregate)
    return out


def cmd_compare(net, args):
    scores = compare_scores(net, _budget(args), args.tolerance, args.max_iters)
    return [dict(baseline=m, spearman=r) for m, r in scores.items()]


def cmd_attack(net, args):
    plan = AttackPlan(args.mode, args.fractions, args.ranking, args.adaptive, args.trials, args.seed)
    trace = run_attack(net, plan, _budget(args))
    rows = []
    for t, points in enumerate(trace.trials):
        for p in points:
            rows.append(dict(mode=plan.mode, trial=t, fraction=p.fraction, cores_remaining=p.cores_remaining,
                             cores_pct=p.cores_pct, assortativity=p.assortativity))
    trial_label = "mean" if plan.mode == "random" else 0
    for p in trace.points:
        rows.append(dict(mode=plan.mode, trial=trial_label, fraction=p.fraction,
                         cores_remaining=p.cores_remaining, cores_pct=p.cores_pct,
                         assortativity=p.assortativity))
    if trace.truncated:
        return rows, trace.message
    return rows


def cmd_fit(path, args):
    with open(path, encoding="utf-8") as fh:
        try:
            records = read_table(fh.read())
        except ValueError as exc:
            raise NetworkParseError(f"unreadable attack table: {exc}", path) from None
    by_mode: dict[str, list[tuple[float, float]]] = {}
    for rec in records:
        try:
            wanted = "mean" if rec["mode"] == "random" else "0"
            if str(rec["trial"]) != wanted:
                continue
            by_mode.setdefault(rec["mode"], []).append(
                (parse_number(rec["fraction"]), parse_number(rec["cores_pct"]))
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise NetworkParseError(f"bad attack record {rec!r}: {exc}", path) from None
    if not by_mode:
        raise NetworkParseError("no sorted or mean-trace rows found", path)
    rows = []
    for mode, pts in sorted(by_mode.items()):
        fit = fit_trace(pts)
        rows.append(dict(mode=mode, a=fit.a, b=fit.b, residual=fit.residual,
                         points=len(pts) - len(fit.excluded), excluded=list(fit.excluded)))
    return rows


COMMANDS = {
    "info": cmd_info,
    "decompose": cmd_decompose,
    "rank": cmd_rank,
    "centrality": cmd_centrality,
    "assortativity": cmd_assortativity,
    "compare": cmd_compare,
    "attack": cmd_attack,
}


def _emit(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def run(args) -> int:
    warning = None
    if args.command == "fit":
        rows = cmd_fit(args.input, args)
    else:
        net = load_network(args.input)
        rows = COMMANDS[args.command](net, args)
        if isinstance(rows, tuple):
            rows, warning = rows
    columns = COLUMNS.get(args.command)
    if columns is None:  # centrality: node label plus one column per measure
        columns = ["node_label", *args.measures]
    _emit(format_table(rows, columns, args.format), args.out)
    if warning:
        print(f"mcrank: warning: trace truncated: {warning}", file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return run(args)
    except (NetworkParseError, UnicodeDecodeError) as exc:
        print(f"mcrank: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except FileNotFoundError as exc:
        print(f"mcrank: error: {exc.filename}: {exc.strerror}", file=sys.stderr)
        return EXIT_PARSE
    except LatticeBudgetExceeded as exc:
        print(f"mcrank: error: lattice budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except metrics.UndefinedCorrelation as exc:
        print(f"mcrank: error: {exc}", file=sys.stderr)
        return EXIT_UNDEFINED
    except (ValueError, metrics.ConvergenceError, OSError) as exc:
        print(f"mcrank: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
