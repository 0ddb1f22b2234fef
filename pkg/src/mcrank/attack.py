"""Node-removal attacks: core-count and assortativity trajectories, decay fits."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import metrics
from .influence import propagate, ranking_order
from .lattice import DEFAULT_MAX_CORES, LatticeBudgetExceeded, build_lattice, core_count
from .multiplex import MultiplexNetwork

RANKING_SOURCES = ("multicorerank", "degree", "eigenvector", "betweenness", "closeness")


@dataclass(frozen=True)
class LatticeBudget:
    max_level: int | None = None
    max_cores: int = DEFAULT_MAX_CORES
    time_budget: float | None = None

    def build(self, net: MultiplexNetwork):
        return build_lattice(net, self.max_level, self.max_cores, self.time_budget)


@dataclass(frozen=True)
class AttackPlan:
    mode: str = "sorted"
    fractions: tuple[float, ...] = (0.0, 0.1, 0.2, 0.3)
    ranking_source: str = "multicorerank"
    adaptive: bool = False
    trials: int = 50
    seed: int = 0

    def __post_init__(self):
        if self.mode not in ("sorted", "random"):
            raise ValueError(f"mode must be 'sorted' or 'random', not {self.mode!r}")
        if self.ranking_source not in RANKING_SOURCES:
            raise ValueError(f"unknown ranking source {self.ranking_source!r}")
        fr = tuple(float(f) for f in self.fractions)
        if not fr:
            raise ValueError("at least one fraction is required")
        if any(not 0.0 <= f < 1.0 for f in fr):
            raise ValueError("fractions must lie in [0, 1)")
        if any(b <= a for a, b in zip(fr, fr[1:])):
            raise ValueError("fractions must be strictly increasing")
        object.__setattr__(self, "fractions", fr)
        if self.trials < 1:
            raise ValueError("trials must be positive")
        if self.mode == "sorted":
            object.__setattr__(self, "trials", 1)


@dataclass
class TracePoint:
    fraction: float
    removed: int
    cores_remaining: float
    cores_pct: float
    assortativity: float | None


@dataclass
class AttackTrace:
    """Measurements along one attack.

    ``points`` is the single trace (sorted mode) or the pointwise mean over
    ``trials`` (random mode). ``truncated`` is set when a lattice budget ran
    out; points after that fraction are then missing.
    """

    mode: str
    baseline_core_count: int
    points: list[TracePoint]
    trials: list[list[TracePoint]] = field(default_factory=list)
    truncated: bool = False
    message: str = ""

    def fractions(self) -> list[float]:
        return [p.fraction for p in self.points]

    def core_pcts(self) -> list[float]:
        return [p.cores_pct for p in self.points]


def node_ranking(
    net: MultiplexNetwork,
    source: str = "multicorerank",
    budget: LatticeBudget = LatticeBudget(),
    lattice=None,
) -> list[int]:
    """Node indices ordered from most to least central; ties broken by label."""
    if source == "multicorerank":
        lat = lattice if lattice is not None else budget.build(net)
        return ranking_order(propagate(lat))
    scores = metrics.centrality(net, source).aggregate
    labels = net.node_labels
    return sorted(range(net.node_count), key=lambda v: (-scores[v], labels[v]))


def _safe_assortativity(net: MultiplexNetwork) -> float | None:
    if net.layer_count < 2 or net.node_count < 2:
        return None
    try:
        return metrics.assortativity(net).global_
    except metrics.UndefinedCorrelation:
        return None


def _measure(net, removed_labels, fraction, baseline, budget) -> TracePoint:
    residual = net.remove_labels(removed_labels)
    count = core_count(budget.build(residual))
    return TracePoint(
        fraction, len(removed_labels), count, 100.0 * count / baseline, _safe_assortativity(residual)
    )


def _victim_counts(n: int, fractions: Sequence[float]) -> list[int]:
    return [math.floor(f * n + 1e-9) for f in fractions]


def _static_trace(net, order_labels, fractions, baseline, budget, baseline_point=None):
    points = []
    for f, m in zip(fractions, _victim_counts(net.node_count, fractions)):
        if m == 0 and baseline_point is not None:
            points.append(TracePoint(f, 0, *baseline_point))
            continue
        points.append(_measure(net, order_labels[:m], f, baseline, budget))
    return points


def _adaptive_trace(net, source, fractions, baseline, budget):
    points = []
    removed: list[str] = []
    current = net
    for f, m in zip(fractions, _victim_counts(net.node_count, fractions)):
        batch = m - len(removed)
        if batch > 0:
            order = node_ranking(current, source, budget)
            removed += [current.node_labels[v] for v in order[:batch]]
            current = net.remove_labels(removed)
        points.append(_measure(net, removed, f, baseline, budget))
    return points


def _mean_trace(trials: list[list[TracePoint]]) -> list[TracePoint]:
    out = []
    for column in zip(*trials):
        assort = [p.assortativity for p in column if p.assortativity is not None]
        out.append(TracePoint(
            column[0].fraction,
            column[0].removed,
            math.fsum(p.cores_remaining for p in column) / len(column),
            math.fsum(p.cores_pct for p in column) / len(column),
            math.fsum(assort) / len(assort) if assort else None,
        ))
    return out


def run_attack(
    net: MultiplexNetwork,
    plan: AttackPlan,
    budget: LatticeBudget = LatticeBudget(),
    order: Sequence[str] | None = None,
) -> AttackTrace:
    """Remove nodes according to ``plan`` and record the resulting trajectory.

    Sorted mode ranks the intact network once (or, with ``plan.adaptive``,
    re-ranks the survivors before each batch) and removes the top
    ``floor(f * |V|)`` nodes for every fraction ``f``. Random mode draws a
    uniform removal order per trial from an independent child seed of
    ``plan.seed``. ``order`` overrides the computed ranking with explicit
    node labels (sorted, non-adaptive mode only).
    """
    lattice = budget.build(net)
    baseline = core_count(lattice)
    base_assort = _safe_assortativity(net)
    base_point = (baseline, 100.0, base_assort)
    trace = AttackTrace(plan.mode, baseline, [])
    try:
        if plan.mode == "sorted":
            if plan.adaptive and order is None:
                trace.points = _adaptive_trace(
                    net, plan.ranking_source, plan.fractions, baseline, budget
                )
            else:
                if order is None:
                    ranked = node_ranking(net, plan.ranking_source, budget, lattice)
                    order = [net.node_labels[v] for v in ranked]
                trace.points = _static_trace(
                    net, list(order), plan.fractions, baseline, budget, base_point
                )
        else:
            children = np.random.SeedSequence(plan.seed).spawn(plan.trials)
            for child in children:
                perm = np.random.default_rng(child).permutation(net.node_count)
                labels = [net.node_labels[int(v)] for v in perm]
                trace.trials.append(
                    _static_trace(net, labels, plan.fractions, baseline, budget, base_point)
                )
            trace.points = _mean_trace(trace.trials)
    except LatticeBudgetExceeded as exc:
        trace.truncated = True
        trace.message = str(exc)
        if trace.trials and not trace.points:
            complete = min(len(t) for t in trace.trials)
            trace.points = _mean_trace([t[:complete] for t in trace.trials])
    return trace


@dataclass(frozen=True)
class DecayFit:
    """``y = a * exp(-b * x)`` fitted by least squares on ``ln y``."""

    a: float
    b: float
    residual: float
    excluded: tuple[float, ...] = ()

    def __call__(self, x):
        return self.a * np.exp(-self.b * np.asarray(x, dtype=float))


def fit_decay(points: Sequence[tuple[float, float]]) -> DecayFit:
    """Fit ``y = a e^{-bx}``; all ``y`` must be positive (drop zero-core points first)."""
    if len(points) < 2:
        raise ValueError("need at least two points")
    x = np.array([p[0] for p in points], dtype=float)
    y = np.array([p[1] for p in points], dtype=float)
    if np.any(y <= 0):
        raise ValueError("y values must be positive; drop zero-core points before fitting")
    if np.unique(x).size < 2:
        raise ValueError("need at least two distinct x values")
    ly = np.log(y)
    xm, ym = x.mean(), ly.mean()
    slope = float(((x - xm) @ (ly - ym)) / ((x - xm) @ (x - xm)))
    intercept = float(ym - slope * xm)
    res = ly - (intercept + slope * x)
    return DecayFit(math.exp(intercept), -slope, float(res @ res))


def fit_trace(points: Sequence[tuple[float, float]]) -> DecayFit:
    """:func:`fit_decay` after dropping points with non-positive ``y``.

    The x-values of dropped points are reported in ``DecayFit.excluded``.
    """
    kept = [(x, y) for x, y in points if y > 0]
    excluded = tuple(x for x, y in points if y <= 0)
    fit = fit_decay(kept)
    return DecayFit(fit.a, fit.b, fit.residual, excluded)


def assortativity_at_removals(
    net: MultiplexNetwork,
    fractions: Sequence[float] = (0.1, 0.2, 0.3),
    ranking: str = "multicorerank",
    budget: LatticeBudget = LatticeBudget(),
) -> list[tuple[float, float | None]]:
    """``(fraction, r_G)`` rows after targeted removal, starting with fraction 0."""
    fr = tuple(fractions)
    if not fr or fr[0] != 0.0:
        fr = (0.0,) + fr
    ranked = node_ranking(net, ranking, budget)
    labels = [net.node_labels[v] for v in ranked]
    rows = []
    for f, m in zip(fr, _victim_counts(net.node_count, fr)):
        rows.append((f, _safe_assortativity(net.remove_labels(labels[:m]))))
    return rows
