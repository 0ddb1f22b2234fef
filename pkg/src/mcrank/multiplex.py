"""Node-aligned multiplex networks: construction, edge-list I/O, node removal
and a seeded synthetic generator with tunable inter-layer degree correlation.
"""
from __future__ import annotations

import io
import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


class NetworkParseError(ValueError):
    """Raised when an edge-list file cannot be parsed."""

    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}".strip() if where else message)


class GenerationError(RuntimeError):
    """Raised when the configuration model cannot produce a simple graph."""


def _index_map(labels: Sequence[str]) -> dict[str, int]:
    return {label: i for i, label in enumerate(labels)}


@dataclass(frozen=True)
class MultiplexNetwork:
    """A multiplex network whose layers share one node set.

    Nodes and layers carry external string labels and dense internal indices
    assigned in first-appearance order. ``adjacency[a][i]`` is the sorted tuple
    of neighbours of node ``i`` in layer ``a``. Instances are immutable; use
    :meth:`from_edges` to build one.
    """

    node_labels: tuple[str, ...]
    layer_labels: tuple[str, ...]
    adjacency: tuple[tuple[tuple[int, ...], ...], ...]
    node_index: dict[str, int] = field(init=False, repr=False, compare=False)
    layer_index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "node_index", _index_map(self.node_labels))
        object.__setattr__(self, "layer_index", _index_map(self.layer_labels))

    @classmethod
    def from_edges(
        cls,
        edges: Iterable[tuple[str, str, str]],
        node_labels: Sequence[str] = (),
        layer_labels: Sequence[str] = (),
    ) -> "MultiplexNetwork":
        """Build a network from ``(layer, u, v)`` label triples.

        ``node_labels`` and ``layer_labels`` pre-register labels (so isolated
        nodes and empty layers survive); further labels are appended in
        first-appearance order. Duplicate edges collapse; self-loops raise.
        """
        nodes = list(node_labels)
        layers = list(layer_labels)
        nidx = _index_map(nodes)
        lidx = _index_map(layers)
        if len(nidx) != len(nodes) or len(lidx) != len(layers):
            raise ValueError("duplicate labels")
        edge_sets: list[set[tuple[int, int]]] = [set() for _ in layers]

        for layer, u, v in edges:
            if u == v:
                raise ValueError(f"self-loop on node {u!r} in layer {layer!r}")
            if layer not in lidx:
                lidx[layer] = len(layers)
                layers.append(layer)
                edge_sets.append(set())
            for label in (u, v):
                if label not in nidx:
                    nidx[label] = len(nodes)
                    nodes.append(label)
            i, j = nidx[u], nidx[v]
            edge_sets[lidx[layer]].add((min(i, j), max(i, j)))

        return cls._from_index_edges(nodes, layers, edge_sets)

    @classmethod
    def _from_index_edges(cls, nodes, layers, edge_sets) -> "MultiplexNetwork":
        n = len(nodes)
        adjacency = []
        for es in edge_sets:
            nbrs: list[list[int]] = [[] for _ in range(n)]
            for i, j in es:
                nbrs[i].append(j)
                nbrs[j].append(i)
            adjacency.append(tuple(tuple(sorted(a)) for a in nbrs))
        return cls(tuple(nodes), tuple(layers), tuple(adjacency))

    @property
    def node_count(self) -> int:
        return len(self.node_labels)

    @property
    def layer_count(self) -> int:
        return len(self.layer_labels)

    def neighbors(self, layer: int, node: int) -> tuple[int, ...]:
        return self.adjacency[layer][node]

    def edges(self, layer: int) -> list[tuple[int, int]]:
        """Edges of one layer as ``(i, j)`` index pairs with ``i < j``, sorted."""
        return [(i, j) for i, nb in enumerate(self.adjacency[layer]) for j in nb if i < j]

    def edge_count(self, layer: int | None = None) -> int:
        if layer is None:
            return sum(self.edge_count(a) for a in range(self.layer_count))
        return sum(len(nb) for nb in self.adjacency[layer]) // 2

    def labeled_edges(self, layer: int) -> set[frozenset[str]]:
        """Edges of one layer as unordered label pairs."""
        lab = self.node_labels
        return {frozenset((lab[i], lab[j])) for i, j in self.edges(layer)}

    def degree_vector(self, layer: int) -> np.ndarray:
        """Per-node degree in ``layer`` as an integer array."""
        if not 0 <= layer < self.layer_count:
            raise IndexError(f"layer index {layer} out of range [0, {self.layer_count})")
        return np.array([len(nb) for nb in self.adjacency[layer]], dtype=np.int64)

    def remove_nodes(self, victims: Iterable[int]) -> "MultiplexNetwork":
        """Return the network induced on all nodes not in ``victims``.

        Survivors are re-indexed densely in their original relative order and
        keep their labels; layers are kept even if they become empty.
        """
        dead = set(victims)
        for v in dead:
            if not 0 <= v < self.node_count:
                raise IndexError(f"node index {v} out of range")
        keep = [i for i in range(self.node_count) if i not in dead]
        new_index = {old: new for new, old in enumerate(keep)}
        adjacency = []
        for layer in self.adjacency:
            adjacency.append(tuple(
                tuple(new_index[j] for j in layer[i] if j in new_index) for i in keep
            ))
        return MultiplexNetwork(
            tuple(self.node_labels[i] for i in keep), self.layer_labels, tuple(adjacency)
        )

    def remove_labels(self, labels: Iterable[str]) -> "MultiplexNetwork":
        return self.remove_nodes(self.node_index[x] for x in labels)


def parse_network(text: str, path: str | None = None) -> MultiplexNetwork:
    """Parse multiplex edge-list text (``layer node node [weight]`` per line).

    Lines starting with ``#`` or ``%`` are comments and blank lines are
    skipped. A weight column is parsed as a float and then ignored.
    """
    triples = []
    for lineno, raw in enumerate(io.StringIO(text), start=1):
        line = raw.strip()
        if not line or line[0] in "#%":
            continue
        parts = line.split()
        if len(parts) not in (3, 4):
            raise NetworkParseError(
                f"expected 'layer node node [weight]', got {len(parts)} fields", path, lineno
            )
        if len(parts) == 4:
            try:
                float(parts[3])
            except ValueError:
                raise NetworkParseError(f"invalid weight {parts[3]!r}", path, lineno) from None
        layer, u, v = parts[:3]
        if u == v:
            raise NetworkParseError(f"self-loop on node {u!r}", path, lineno)
        triples.append((layer, u, v))
    if not triples:
        raise NetworkParseError("no edges found", path)
    return MultiplexNetwork.from_edges(triples)


def load_network(path: str | os.PathLike, format: str = "multiplex-edge-list") -> MultiplexNetwork:
    if format != "multiplex-edge-list":
        raise ValueError(f"unsupported network format {format!r}")
    path = os.fspath(path)
    with open(path, encoding="utf-8") as fh:
        return parse_network(fh.read(), path)


def format_network(net: MultiplexNetwork) -> str:
    """Serialise ``net`` in the edge-list format read by :func:`parse_network`.

    Isolated nodes cannot be expressed as edges and are lost on re-reading.
    """
    out = [f"# node_count={net.node_count} layer_count={net.layer_count}"]
    for a, layer in enumerate(net.layer_labels):
        for i, j in net.edges(a):
            out.append(f"{layer} {net.node_labels[i]} {net.node_labels[j]}")
    return "\n".join(out) + "\n"


def save_network(net: MultiplexNetwork, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_network(net))


# --- synthetic generator -------------------------------------------------------

def _power_law_degrees(rng, n, exponent, min_degree, max_degree):
    if max_degree <= 0:
        return np.zeros(n, dtype=np.int64)
    min_degree = max(min_degree, 1)
    ks = np.arange(min_degree, max_degree + 1, dtype=float)
    p = ks ** -exponent
    p /= p.sum()
    degrees = rng.choice(ks.astype(np.int64), size=n, p=p)
    if degrees.sum() % 2:
        degrees[int(np.argmin(degrees))] += 1
    return degrees


def _configuration_edges(rng, degrees, max_rounds):
    """Wire stubs at random, then rewire self-loops and multi-edges away.

    A bad edge is fixed by a double-edge swap with a uniformly chosen edge;
    swaps that would create a new bad edge are rejected.
    """
    stubs = np.repeat(np.arange(len(degrees)), degrees)
    rng.shuffle(stubs)
    edges = [tuple(sorted(p)) for p in stubs.reshape(-1, 2).tolist()]
    if not edges:
        return set()

    def bad_positions():
        seen, bad = set(), []
        for pos, (u, v) in enumerate(edges):
            if u == v or (u, v) in seen:
                bad.append(pos)
            seen.add((u, v))
        return bad

    for _ in range(max_rounds):
        bad = bad_positions()
        if not bad:
            return set(edges)
        present = set(edges)
        for pos in bad:
            u, v = edges[pos]
            other = int(rng.integers(len(edges)))
            x, y = edges[other]
            if rng.random() < 0.5:
                x, y = y, x
            e1, e2 = tuple(sorted((u, x))), tuple(sorted((v, y)))
            if other == pos or e1[0] == e1[1] or e2[0] == e2[1] or e1 == e2:
                continue
            if e1 in present or e2 in present:
                continue
            present.discard(edges[pos])
            present.discard(edges[other])
            edges[pos], edges[other] = e1, e2
            present.update((e1, e2))
    raise GenerationError("could not remove self-loops/multi-edges within the rewiring budget")


def generate_synthetic(
    node_count: int,
    layer_count: int,
    target_correlation: float,
    degree_exponent: float = 2.5,
    seed: int = 0,
    min_degree: int = 2,
    max_degree: int | None = None,
    max_rounds: int = 200,
) -> MultiplexNetwork:
    """Generate a multiplex network with heavy-tailed per-layer degrees.

    Every layer draws a degree sequence from a discrete power law
    ``P(k) ~ k**-degree_exponent`` on ``[min_degree, max_degree]``. Degrees
    are then handed out to nodes by the ranks of correlated Gaussian scores:
    layer 0 uses a latent score ``z0`` and layer ``a > 0`` uses
    ``rho*z0 + sqrt(1-rho**2)*noise``, so the layer-0/layer-``a`` rank
    correlation approaches ``rho`` (pairs not involving layer 0 approach
    ``rho**2``). Each layer is wired by the configuration model with
    rewiring to a simple graph.

    ``max_degree`` defaults to ``floor(sqrt(node_count))`` (at least
    ``min_degree``).
    """
    if node_count < 2 or layer_count < 2:
        raise ValueError("need node_count >= 2 and layer_count >= 2")
    if not -1.0 <= target_correlation <= 1.0:
        raise ValueError("target_correlation must lie in [-1, 1]")
    if max_degree is None:
        max_degree = max(min_degree, int(np.sqrt(node_count)))
    max_degree = min(max_degree, node_count - 1)
    min_degree = max(0, min(min_degree, max_degree))
    rng = np.random.default_rng(seed)

    rho = target_correlation
    z0 = rng.standard_normal(node_count)
    edge_sets = []
    for a in range(layer_count):
        if a == 0:
            score = z0
        else:
            score = rho * z0 + np.sqrt(max(0.0, 1.0 - rho * rho)) * rng.standard_normal(node_count)
        seq = np.sort(_power_law_degrees(rng, node_count, degree_exponent, min_degree, max_degree))
        degrees = np.empty(node_count, dtype=np.int64)
        degrees[np.argsort(score, kind="stable")] = seq
        edge_sets.append(_configuration_edges(rng, degrees, max_rounds))

    nodes = [str(i) for i in range(node_count)]
    layers = [str(a + 1) for a in range(layer_count)]
    return MultiplexNetwork._from_index_edges(nodes, layers, edge_sets)


def random_network(
    node_count: int, edges_per_layer: Sequence[int], seed: int = 0
) -> MultiplexNetwork:
    """Uniform random multiplex network with a fixed edge count per layer."""
    rng = np.random.default_rng(seed)
    pairs = [(i, j) for i in range(node_count) for j in range(i + 1, node_count)]
    edge_sets = []
    for m in edges_per_layer:
        if m > len(pairs):
            raise ValueError(f"cannot place {m} edges on {node_count} nodes")
        chosen = rng.choice(len(pairs), size=m, replace=False) if m else []
        edge_sets.append({pairs[int(c)] for c in chosen})
    nodes = [str(i) for i in range(node_count)]
    layers = [str(a + 1) for a in range(len(edges_per_layer))]
    return MultiplexNetwork._from_index_edges(nodes, layers, edge_sets)
