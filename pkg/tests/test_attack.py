import math

import numpy as np
import pytest

from oracles import brute_force_cores
from mcrank import metrics
from mcrank.attack import (
    AttackPlan,
    LatticeBudget,
    assortativity_at_removals,
    fit_decay,
    fit_trace,
    node_ranking,
    run_attack,
)
from mcrank.lattice import build_lattice, core_count
from mcrank.multiplex import MultiplexNetwork, generate_synthetic, random_network


@pytest.fixture(scope="module")
def medium():
    return random_network(40, [70, 70], seed=1)


def test_plan_validation():
    with pytest.raises(ValueError):
        AttackPlan(fractions=(0.2, 0.1))
    with pytest.raises(ValueError):
        AttackPlan(fractions=(0.0, 1.0))
    with pytest.raises(ValueError):
        AttackPlan(mode="greedy")
    with pytest.raises(ValueError):
        AttackPlan(ranking_source="pagerank")
    with pytest.raises(ValueError):
        AttackPlan(mode="random", trials=0)
    assert AttackPlan(mode="sorted", trials=7).trials == 1


def test_sorted_attack_on_toy_removes_b(toy):
    trace = run_attack(toy, AttackPlan(fractions=(1 / 6,)))
    # B and E tie at the top; the label tie-break picks B, leaving the expected residual network
    assert node_ranking(toy)[0] == toy.node_index["B"]
    residual = toy.remove_labels("B")
    assert trace.points[0].removed == 1
    assert trace.points[0].cores_remaining == len(brute_force_cores(residual)) == 6
    assert trace.points[0].cores_pct == pytest.approx(100 * 6 / 11)
    assert trace.baseline_core_count == 11


def test_fraction_zero_is_baseline(toy):
    trace = run_attack(toy, AttackPlan(fractions=(0.0,)))
    (p,) = trace.points
    assert (p.removed, p.cores_remaining, p.cores_pct) == (0, 11, 100.0)
    assert p.assortativity == pytest.approx(metrics.assortativity(toy).global_)


def test_explicit_order_override(toy):
    trace = run_attack(toy, AttackPlan(fractions=(0.0, 1 / 6)), order=list("EBCDFA"))
    residual = toy.remove_labels("E")
    assert trace.points[1].cores_remaining == core_count(build_lattice(residual))


@pytest.mark.parametrize("source", ["multicorerank", "degree", "eigenvector", "betweenness", "closeness"])
def test_sorted_traces_are_monotone(medium, source):
    plan = AttackPlan(fractions=tuple(np.round(np.arange(0, 0.95, 0.1), 2)), ranking_source=source)
    counts = [p.cores_remaining for p in run_attack(medium, plan).points]
    assert counts[0] == core_count(build_lattice(medium))
    assert all(b <= a for a, b in zip(counts, counts[1:]))


def test_static_victims_are_nested(medium):
    order = node_ranking(medium)
    fractions = (0.1, 0.25, 0.5)
    sets = [set(order[: math.floor(f * medium.node_count)]) for f in fractions]
    assert sets[0] <= sets[1] <= sets[2]
    trace = run_attack(medium, AttackPlan(fractions=fractions))
    assert [p.removed for p in trace.points] == [4, 10, 20]


def test_adaptive_mode_runs_and_differs_only_by_reranking(medium):
    fractions = (0.0, 0.1, 0.2, 0.3)
    adaptive = run_attack(medium, AttackPlan(fractions=fractions, adaptive=True))
    static = run_attack(medium, AttackPlan(fractions=fractions))
    assert [p.removed for p in adaptive.points] == [p.removed for p in static.points]
    assert adaptive.points[0].cores_remaining == static.points[0].cores_remaining
    # first batch is ranked on the intact network in both modes
    assert adaptive.points[1].cores_remaining == static.points[1].cores_remaining


def test_random_mode_is_deterministic(medium):
    plan = AttackPlan(mode="random", fractions=(0.0, 0.2, 0.4), trials=50, seed=42)
    a = run_attack(medium, plan)
    b = run_attack(medium, plan)
    assert [(p.cores_remaining, p.cores_pct, p.assortativity) for p in a.points] == \
           [(p.cores_remaining, p.cores_pct, p.assortativity) for p in b.points]
    assert len(a.trials) == 50
    other = run_attack(medium, AttackPlan(mode="random", fractions=(0.0, 0.2, 0.4), trials=50, seed=43))
    assert [p.cores_pct for p in other.points] != [p.cores_pct for p in a.points]


def test_random_mean_within_trial_bounds_and_trials_monotone(medium):
    plan = AttackPlan(mode="random", fractions=(0.0, 0.1, 0.3, 0.5), trials=12, seed=5)
    trace = run_attack(medium, plan)
    for i, p in enumerate(trace.points):
        column = [t[i].cores_remaining for t in trace.trials]
        assert min(column) <= p.cores_remaining <= max(column)
        assert p.cores_remaining == pytest.approx(sum(column) / len(column))
    for t in trace.trials:
        counts = [p.cores_remaining for p in t]
        assert all(b <= a for a, b in zip(counts, counts[1:]))


def test_residual_assortativity_in_range(medium):
    trace = run_attack(medium, AttackPlan(fractions=(0.0, 0.2, 0.4, 0.6)))
    for p in trace.points:
        assert p.assortativity is None or -1 <= p.assortativity <= 1


def test_budget_truncates_trace(toy):
    # level 3 holds the deepest core of the residual networks, so they fit;
    # the intact network needs level 4 and must be rejected up front
    with pytest.raises(Exception):
        run_attack(toy, AttackPlan(fractions=(0.0, 0.5)), LatticeBudget(max_level=3))
    trace = run_attack(toy, AttackPlan(fractions=(0.0, 0.2, 0.5)), LatticeBudget(max_cores=11),
                       order=list("ABCDEF"))
    assert not trace.truncated
    tiny = run_attack(toy, AttackPlan(mode="random", fractions=(0.0, 0.5), trials=3),
                      LatticeBudget(max_cores=11))
    assert not tiny.truncated


def test_budget_exceeded_mid_trace_sets_flag():
    # a network whose residual after removing an isolated node is as large as the original
    net = MultiplexNetwork.from_edges(
        [("1", "a", "b"), ("2", "a", "b"), ("1", "b", "c"), ("2", "b", "c"), ("1", "a", "c"), ("2", "a", "c")],
        node_labels=["z", "a", "b", "c"],
    )
    base = core_count(build_lattice(net))

    class Flaky(LatticeBudget):
        calls = 0

        def build(self, n):
            Flaky.calls += 1
            if Flaky.calls > 1:
                return build_lattice(n, max_cores=1)
            return build_lattice(n)

    trace = run_attack(net, AttackPlan(fractions=(0.0, 0.25, 0.5)), Flaky(), order=list("zabc"))
    assert trace.truncated
    assert "max_cores" in trace.message
    assert trace.baseline_core_count == base


def test_fit_decay_noise_free():
    xs = [i / 10 for i in range(6)]
    fit = fit_decay([(x, 100 * math.exp(-3 * x)) for x in xs])
    assert fit.a == pytest.approx(100, rel=1e-9)
    assert fit.b == pytest.approx(3, rel=1e-9)
    assert fit.residual < 1e-20


def test_fit_decay_constant():
    fit = fit_decay([(0.0, 7.0), (0.5, 7.0), (1.0, 7.0)])
    assert fit.a == pytest.approx(7.0)
    assert fit.b == pytest.approx(0.0, abs=1e-12)


def test_fit_decay_noisy():
    rng = np.random.default_rng(5)
    x = np.linspace(0, 0.5, 11)
    y = 80 * np.exp(-2 * x) * (1 + rng.uniform(-0.01, 0.01, x.size))
    fit = fit_decay(list(zip(x, y)))
    # independent least-squares check on the log-linear model
    slope, intercept = np.polyfit(x, np.log(y), 1)
    assert fit.b == pytest.approx(-slope, rel=1e-9)
    assert fit.a == pytest.approx(math.exp(intercept), rel=1e-9)
    assert abs(fit.a - 80) / 80 < 0.05
    assert abs(fit.b - 2) / 2 < 0.05


def test_fit_decay_errors():
    with pytest.raises(ValueError):
        fit_decay([(0.0, 1.0)])
    with pytest.raises(ValueError):
        fit_decay([(0.0, 1.0), (0.1, 0.0)])
    with pytest.raises(ValueError):
        fit_decay([(0.1, 1.0), (0.1, 2.0)])


def test_fit_trace_drops_zero_points():
    pts = [(0.0, 100.0), (0.1, 50.0), (0.2, 25.0), (0.3, 0.0)]
    fit = fit_trace(pts)
    assert fit.excluded == (0.3,)
    assert fit.b == pytest.approx(10 * math.log(2))
    assert fit(0.1) == pytest.approx(50.0)


def test_assortativity_at_removals_intact_row(toy):
    rows = assortativity_at_removals(toy)
    assert [f for f, _ in rows] == [0.0, 0.1, 0.2, 0.3]
    assert rows[0][1] == pytest.approx(metrics.assortativity(toy).global_)


def test_assortativity_identical_layers_stays_one():
    base = random_network(30, [60], seed=3)
    edges = [(layer, base.node_labels[i], base.node_labels[j]) for layer in "12" for i, j in base.edges(0)]
    net = MultiplexNetwork.from_edges(edges, node_labels=base.node_labels)
    for f, r in assortativity_at_removals(net, ranking="degree"):
        assert r == pytest.approx(1.0)


def test_disassortative_stays_negative():
    net = generate_synthetic(200, 2, -0.8, 2.5, seed=1)
    rows = dict(assortativity_at_removals(net, (0.1,)))
    assert rows[0.0] < 0
    assert rows[0.1] < 0
