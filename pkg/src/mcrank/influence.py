"""MultiCoreRank: node influence propagated down the core lattice.

All influences are kept as natural logarithms so that deep lattices on large
networks never overflow. Level 0 starts every node at influence 1. For a
node ``v`` present in level ``l+1``::

    inf_{l+1}(v) = sum over stored level-(l+1) cores C containing v
                   sum over fathers F of C
                   (l+1) * inf_l(v) * inf(F)

where ``inf(F)`` is the mean level-``l`` influence of F's members.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .lattice import Core, CoreLattice, iter_bits

# Relative gap in log-influence under which two same-level nodes are tied.
TIE_RTOL = 1e-12


def logsumexp(xs: Sequence[float]) -> float:
    """``log(sum(exp(x) for x in xs))`` without overflow.

    The summation uses :func:`math.fsum`, so the result does not depend on
    the order of ``xs``.
    """
    if not xs:
        return -math.inf
    m = max(xs)
    if math.isinf(m):
        return m
    return m + math.log(math.fsum(math.exp(x - m) for x in xs))


def core_influence(core: Core, level_influences: Sequence[float] | dict[int, float]) -> float:
    """Log of the mean influence of the members of ``core``."""
    members = core.nodes()
    if not members:
        raise ValueError(f"core {core.vector} is empty")
    return logsumexp([level_influences[v] for v in members]) - math.log(len(members))


@dataclass
class InfluenceTable:
    """Per-level log-influences and the final lexicographic scores.

    ``per_level[l]`` maps node index to ``log inf_l(v)`` for every node that
    belongs to some stored level-``l`` core. ``core_log_influence`` keeps the
    log-influence of every stored core.
    """

    node_labels: tuple[str, ...]
    per_level: list[dict[int, float]] = field(default_factory=list)
    core_log_influence: dict[tuple[int, ...], float] = field(default_factory=dict)

    @property
    def node_count(self) -> int:
        return len(self.node_labels)

    def deepest_level(self, v: int) -> int:
        for lv in range(len(self.per_level) - 1, -1, -1):
            if v in self.per_level[lv]:
                return lv
        raise KeyError(v)

    def final_score(self, v: int) -> tuple[int, float]:
        lv = self.deepest_level(v)
        return lv, self.per_level[lv][v]

    def scores(self) -> list[tuple[int, float]]:
        return [self.final_score(v) for v in range(self.node_count)]

    def influence(self, label: str, lv: int) -> float:
        """Influence of node ``label`` at level ``lv`` (linear scale)."""
        return math.exp(self.per_level[lv][self.node_labels.index(label)])


def propagate(lattice: CoreLattice) -> InfluenceTable:
    """Compute MultiCoreRank influences for every node of the lattice's network.

    Factoring out ``inf_l(v)`` and the level weight, each level-``l+1`` core C
    contributes ``S_C = sum_F inf(F)`` to all of its members, so
    ``log inf_{l+1}(v) = log(l+1) + log inf_l(v) + logsumexp_{C ∋ v} log S_C``.
    Core containment guarantees every member of C also belongs to each of
    its fathers, so ``inf_l(v)`` is always defined.
    """
    n = lattice.network.node_count
    table = InfluenceTable(lattice.network.node_labels)
    if not lattice.levels:
        return table
    table.per_level.append({v: 0.0 for v in range(n)})
    for lv in range(len(lattice.levels)):
        for k, core in lattice.levels[lv].items():
            table.core_log_influence[k] = core_influence(core, table.per_level[lv])
        if lv + 1 >= len(lattice.levels):
            break
        weight = math.log(lv + 1)
        prev = table.per_level[lv]
        terms: dict[int, list[float]] = {}
        for k, core in lattice.levels[lv + 1].items():
            s_c = logsumexp([table.core_log_influence[f] for f in lattice.fathers[k]])
            for v in iter_bits(core.members):
                terms.setdefault(v, []).append(s_c)
        table.per_level.append({
            v: weight + prev[v] + logsumexp(ts) for v, ts in sorted(terms.items())
        })
    return table


@dataclass(frozen=True)
class RankedNode:
    label: str
    index: int
    deepest_level: int
    log_influence: float
    position: int
    rank: float


def _tie_groups(order: list[int], scores: list[tuple[int, float]]) -> list[list[int]]:
    groups: list[list[int]] = []
    for v in order:
        if groups:
            lv, x = scores[groups[-1][-1]]
            lw, y = scores[v]
            if lv == lw and abs(x - y) <= TIE_RTOL * max(1.0, abs(x), abs(y)):
                groups[-1].append(v)
                continue
        groups.append([v])
    return groups


def rank(table: InfluenceTable) -> list[RankedNode]:
    """Order nodes from most to least influential.

    Nodes compare by deepest level first, then by log-influence at that
    level; values within ``TIE_RTOL`` count as ties. Ties are ordered by
    label and share the average of their 1-based positions in ``rank``.
    """
    scores = table.scores()
    labels = table.node_labels
    order = sorted(range(table.node_count), key=lambda v: (-scores[v][0], -scores[v][1]))
    out: list[RankedNode] = []
    pos = 0
    for group in _tie_groups(order, scores):
        avg = pos + (len(group) + 1) / 2
        for v in sorted(group, key=lambda v: labels[v]):
            pos += 1
            out.append(RankedNode(labels[v], v, scores[v][0], scores[v][1], pos, avg))
    return out


def ranking_order(table: InfluenceTable) -> list[int]:
    """Node indices, most influential first."""
    return [r.index for r in rank(table)]


def score_vector(table: InfluenceTable) -> list[float]:
    """Per-node numeric score whose ordering matches :func:`rank`.

    Tied nodes get equal values, larger means more influential; suitable as
    input to a rank correlation.
    """
    ranked = rank(table)
    out = [0.0] * table.node_count
    for r in ranked:
        out[r.index] = float(table.node_count) - r.rank
    return out


def multicorerank(lattice: CoreLattice) -> list[RankedNode]:
    return rank(propagate(lattice))
