"""Classical per-layer centralities, their multiplex sums, and rank correlations.

Every centrality is computed layer by layer on that layer alone; the multiplex
value of a node is the sum of its per-layer values.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np
from scipy import sparse
from scipy.stats import rankdata

from .multiplex import MultiplexNetwork

MEASURES = ("degree", "eigenvector", "betweenness", "closeness")


class UndefinedCorrelation(ValueError):
    """A correlation was requested for a constant input vector."""


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


@dataclass
class CentralityVector:
    measure: str
    per_layer: np.ndarray  # shape (layers, nodes)

    @property
    def aggregate(self) -> np.ndarray:
        return self.per_layer.sum(axis=0)

    def layer(self, a: int) -> np.ndarray:
        return self.per_layer[a]


def degree_centrality(net: MultiplexNetwork) -> CentralityVector:
    """Per-layer degrees; the aggregate is the overlapping degree."""
    per_layer = np.zeros((net.layer_count, net.node_count), dtype=np.int64)
    for a in range(net.layer_count):
        per_layer[a] = net.degree_vector(a)
    return CentralityVector("degree", per_layer)


def adjacency_matrix(net: MultiplexNetwork, layer: int) -> sparse.csr_matrix:
    edges = net.edges(layer)
    n = net.node_count
    if not edges:
        return sparse.csr_matrix((n, n))
    i, j = np.array(edges).T
    data = np.ones(2 * len(edges))
    return sparse.csr_matrix((data, (np.r_[i, j], np.r_[j, i])), shape=(n, n))


def layer_eigenvector(adj, tolerance: float = 1e-10, max_iters: int = 10_000) -> tuple[np.ndarray, float]:
    """Dominant eigenvector of a symmetric non-negative matrix by power iteration.

    Iterates ``x <- (A + I) x`` from the uniform vector; the shift keeps
    bipartite graphs (eigenvalues ``±lambda``) from oscillating without
    changing the eigenvectors. Stops once ``||A x - lambda x|| <= tolerance``
    for the unit-norm iterate ``x``, with ``lambda`` its Rayleigh quotient.
    Returns ``(x, lambda)``; an edgeless matrix yields zeros.
    """
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    n = adj.shape[0]
    if n == 0 or adj.nnz == 0:
        return np.zeros(n), 0.0
    x = np.full(n, 1.0 / np.sqrt(n))
    residual = np.inf
    for _ in range(max_iters):
        ax = adj @ x
        lam = float(x @ ax)
        residual = float(np.linalg.norm(ax - lam * x))
        if residual <= tolerance:
            return np.abs(x), lam
        y = ax + x
        x = y / np.linalg.norm(y)
    raise ConvergenceError(f"power iteration did not converge in {max_iters} iterations", residual)


def eigenvector_centrality(
    net: MultiplexNetwork, tolerance: float = 1e-10, max_iters: int = 10_000
) -> CentralityVector:
    per_layer = np.zeros((net.layer_count, net.node_count))
    for a in range(net.layer_count):
        per_layer[a], _ = layer_eigenvector(adjacency_matrix(net, a), tolerance, max_iters)
    return CentralityVector("eigenvector", per_layer)


def _bfs_counts(adjacency, s):
    """Single-source BFS: visit order, predecessor lists, path counts, distances."""
    n = len(adjacency)
    sigma = [0] * n
    dist = [-1] * n
    preds: list[list[int]] = [[] for _ in range(n)]
    sigma[s], dist[s] = 1, 0
    order = []
    queue = deque([s])
    while queue:
        v = queue.popleft()
        order.append(v)
        for w in adjacency[v]:
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                queue.append(w)
            if dist[w] == dist[v] + 1:
                sigma[w] += sigma[v]
                preds[w].append(v)
    return order, preds, sigma, dist


def layer_betweenness(adjacency: Sequence[Sequence[int]]) -> np.ndarray:
    """Brandes accumulation over ordered source/target pairs (unnormalised)."""
    n = len(adjacency)
    bc = np.zeros(n)
    for s in range(n):
        order, preds, sigma, _ = _bfs_counts(adjacency, s)
        delta = [0.0] * n
        for w in reversed(order):
            coeff = (1.0 + delta[w]) / sigma[w]
            for v in preds[w]:
                delta[v] += sigma[v] * coeff
            if w != s:
                bc[w] += delta[w]
    return bc


def betweenness_centrality(net: MultiplexNetwork) -> CentralityVector:
    per_layer = np.array([layer_betweenness(adj) for adj in net.adjacency]).reshape(
        net.layer_count, net.node_count
    )
    return CentralityVector("betweenness", per_layer)


def layer_closeness(adjacency: Sequence[Sequence[int]]) -> np.ndarray:
    """Closeness scaled by the reachable fraction of the graph.

    ``c_i = (r/(n-1)) * (r / sum of distances to the r reachable nodes)``,
    and 0 for a node that reaches nothing.
    """
    n = len(adjacency)
    out = np.zeros(n)
    for s in range(n):
        _, _, _, dist = _bfs_counts(adjacency, s)
        reach = [d for d in dist if d > 0]
        if reach:
            r = len(reach)
            out[s] = (r / (n - 1)) * (r / sum(reach))
    return out


def closeness_centrality(net: MultiplexNetwork) -> CentralityVector:
    per_layer = np.array([layer_closeness(adj) for adj in net.adjacency]).reshape(
        net.layer_count, net.node_count
    )
    return CentralityVector("closeness", per_layer)


def centrality(net: MultiplexNetwork, measure: str, **kwargs) -> CentralityVector:
    funcs = {
        "degree": degree_centrality,
        "eigenvector": eigenvector_centrality,
        "betweenness": betweenness_centrality,
        "closeness": closeness_centrality,
    }
    try:
        return funcs[measure](net, **kwargs)
    except KeyError:
        raise ValueError(f"unknown measure {measure!r}; choose from {MEASURES}") from None


def spearman(x: Sequence[float], y: Sequence[float]) -> float:
    """Spearman correlation: Pearson correlation of average-tie ranks."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("inputs must be 1-d sequences of equal length")
    if len(x) < 2:
        raise ValueError("need at least two observations")
    rx, ry = rankdata(x), rankdata(y)
    rx -= rx.mean()
    ry -= ry.mean()
    sx, sy = np.sqrt(rx @ rx), np.sqrt(ry @ ry)
    if sx == 0 or sy == 0:
        raise UndefinedCorrelation("correlation undefined for a constant vector")
    return float(np.clip((rx @ ry) / (sx * sy), -1.0, 1.0))


@dataclass
class AssortativityReport:
    """Layer-layer degree correlations and their mean.

    ``pairwise[(a, b)]`` (``a < b``) is ``None`` when either layer has a
    constant degree vector.
    """

    pairwise: dict[tuple[int, int], float | None]
    global_: float

    def defined_pairs(self) -> dict[tuple[int, int], float]:
        return {k: v for k, v in self.pairwise.items() if v is not None}


def assortativity(net: MultiplexNetwork) -> AssortativityReport:
    """Spearman degree correlation for every layer pair, averaged over pairs."""
    if net.layer_count < 2:
        raise ValueError("assortativity needs at least two layers")
    degrees = [net.degree_vector(a) for a in range(net.layer_count)]
    pairwise: dict[tuple[int, int], float | None] = {}
    for a, b in combinations(range(net.layer_count), 2):
        try:
            pairwise[(a, b)] = spearman(degrees[a], degrees[b])
        except (UndefinedCorrelation, ValueError):
            pairwise[(a, b)] = None
    defined = [r for r in pairwise.values() if r is not None]
    if not defined:
        raise UndefinedCorrelation("every layer pair has an undefined degree correlation")
    return AssortativityReport(pairwise, float(np.mean(defined)))
