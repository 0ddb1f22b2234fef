"""Multiplex k-core computation and breadth-first enumeration of the core lattice.

Member sets are Python ints used as bitsets (bit ``i`` set <=> node ``i`` is a
member). Intersections of father cores, the dominant operation during
enumeration, are then a single ``&``.
"""
from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .multiplex import MultiplexNetwork

CoreVector = tuple[int, ...]

DEFAULT_MAX_CORES = 1_000_000


class LatticeBudgetExceeded(RuntimeError):
    """Enumeration stopped early because a resource budget ran out.

    ``partial`` holds the lattice built so far; all completed levels in it
    are exact.
    """

    def __init__(self, message: str, partial: "CoreLattice"):
        super().__init__(message)
        self.partial = partial


def bits_of(nodes: Iterable[int]) -> int:
    mask = 0
    for v in nodes:
        mask |= 1 << v
    return mask


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def full_mask(n: int) -> int:
    return (1 << n) - 1


def level(k: Sequence[int]) -> int:
    return sum(k)


def fathers_of(k: CoreVector) -> list[CoreVector]:
    """Vectors obtained by decrementing one non-zero component of ``k``."""
    out = []
    for a, x in enumerate(k):
        if x:
            out.append(k[:a] + (x - 1,) + k[a + 1:])
    return out


@dataclass(frozen=True)
class Core:
    vector: CoreVector
    members: int

    @property
    def level(self) -> int:
        return sum(self.vector)

    def nodes(self) -> list[int]:
        return list(iter_bits(self.members))

    def __len__(self) -> int:
        return self.members.bit_count()

    def __contains__(self, node: int) -> bool:
        return bool(self.members >> node & 1)


def _neighbor_masks(net: MultiplexNetwork) -> list[list[int]]:
    return [[bits_of(nb) for nb in layer] for layer in net.adjacency]


def peel_within(seed: int, net: MultiplexNetwork, k: Sequence[int], _masks=None) -> int:
    """Peel ``seed`` down to the ``k``-core of ``net``.

    ``seed`` is a member bitset known to contain the true core (for example
    the intersection of all father cores). Nodes whose degree inside the
    current set falls below ``k[a]`` in any layer ``a`` are deleted until no
    violator remains. Returns the surviving bitset.
    """
    k = tuple(k)
    if len(k) != net.layer_count:
        raise ValueError(f"core vector has {len(k)} components, network has {net.layer_count} layers")
    if not seed:
        return 0
    masks = _masks if _masks is not None else _neighbor_masks(net)
    active = [a for a, x in enumerate(k) if x > 0]
    if not active:
        return seed

    alive = seed
    degree: dict[int, list[int]] = {}
    queue = deque()
    for v in iter_bits(seed):
        d = [(masks[a][v] & seed).bit_count() for a in active]
        degree[v] = d
        if any(d[i] < k[a] for i, a in enumerate(active)):
            queue.append(v)
            alive &= ~(1 << v)

    adjacency = net.adjacency
    while queue:
        v = queue.popleft()
        for i, a in enumerate(active):
            ka = k[a]
            for u in adjacency[a][v]:
                if alive >> u & 1:
                    du = degree[u]
                    du[i] -= 1
                    if du[i] < ka:
                        alive &= ~(1 << u)
                        queue.append(u)
    return alive


def k_core(net: MultiplexNetwork, k: Sequence[int]) -> set[int]:
    """The ``k``-core of ``net`` as a set of node indices (possibly empty)."""
    return set(iter_bits(peel_within(full_mask(net.node_count), net, k)))


@dataclass
class CoreLattice:
    """All non-empty cores of a network, grouped by level (L1 norm).

    ``levels[l]`` maps each stored vector of level ``l`` to its :class:`Core`;
    ``fathers[k]`` lists the stored fathers of ``k`` (for a stored ``k`` every
    father is stored, by core containment).
    """

    network: MultiplexNetwork
    levels: list[dict[CoreVector, Core]] = field(default_factory=list)
    fathers: dict[CoreVector, list[CoreVector]] = field(default_factory=dict)
    dead: set[CoreVector] = field(default_factory=set)

    def __len__(self) -> int:
        return sum(len(lv) for lv in self.levels)

    def __contains__(self, k) -> bool:
        k = tuple(k)
        return sum(k) < len(self.levels) and k in self.levels[sum(k)]

    def __getitem__(self, k) -> Core:
        k = tuple(k)
        return self.levels[sum(k)][k]

    def cores(self) -> Iterator[Core]:
        for lv in self.levels:
            for k in sorted(lv):
                yield lv[k]

    @property
    def max_level(self) -> int:
        return len(self.levels) - 1

    def members_by_vector(self) -> dict[CoreVector, frozenset[int]]:
        return {c.vector: frozenset(c.nodes()) for c in self.cores()}


def core_count(lattice: CoreLattice) -> int:
    """Number of stored (non-empty) cores, the level-0 root included."""
    return len(lattice)


def natural_max_level(net: MultiplexNetwork) -> int:
    return sum(max((len(nb) for nb in layer), default=0) for layer in net.adjacency)


def build_lattice(
    net: MultiplexNetwork,
    max_level: int | None = None,
    max_cores: int = DEFAULT_MAX_CORES,
    time_budget: float | None = None,
) -> CoreLattice:
    """Enumerate every non-empty core of ``net`` level by level.

    Level ``l+1`` candidates are the one-component increments of the stored
    level-``l`` vectors. Each candidate is evaluated once: if any of its
    fathers is missing it is empty and pruned, otherwise it is peeled from
    the intersection of its fathers' members. Empty results are recorded in
    ``lattice.dead`` and never expanded.

    Raises :class:`LatticeBudgetExceeded` (carrying the partial lattice) when
    a non-empty core would lie above ``max_level``, when more than
    ``max_cores`` cores would be stored, or when ``time_budget`` seconds have
    elapsed.
    """
    if max_level is None:
        max_level = natural_max_level(net)
    if max_cores < 1:
        raise ValueError("max_cores must be positive")
    start = time.monotonic()
    masks = _neighbor_masks(net)
    L = net.layer_count
    root = (0,) * L
    lattice = CoreLattice(net, [{root: Core(root, full_mask(net.node_count))}], {root: []})
    stored = 1

    while True:
        current = lattice.levels[-1]
        candidates = sorted({
            k[:a] + (k[a] + 1,) + k[a + 1:] for k in current for a in range(L)
        })
        nxt: dict[CoreVector, Core] = {}
        for cand in candidates:
            if time_budget is not None and time.monotonic() - start > time_budget:
                raise LatticeBudgetExceeded(
                    f"time budget of {time_budget}s exceeded at level {len(lattice.levels)}", lattice
                )
            fs = fathers_of(cand)
            if any(f not in current for f in fs):
                lattice.dead.add(cand)
                continue
            seed = current[fs[0]].members
            for f in fs[1:]:
                seed &= current[f].members
            members = peel_within(seed, net, cand, masks)
            if not members:
                lattice.dead.add(cand)
                continue
            if len(lattice.levels) > max_level:
                raise LatticeBudgetExceeded(
                    f"non-empty core {cand} lies above max_level={max_level}", lattice
                )
            if stored + 1 > max_cores:
                raise LatticeBudgetExceeded(f"more than max_cores={max_cores} cores", lattice)
            stored += 1
            nxt[cand] = Core(cand, members)
            lattice.fathers[cand] = fs
        if not nxt:
            return lattice
        lattice.levels.append(nxt)
