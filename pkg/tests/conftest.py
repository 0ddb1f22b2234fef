import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

import mcrank
from mcrank.multiplex import MultiplexNetwork

# Core lattice of the bundled example network, keyed by core vector.
TOY_CORES = {
    (0, 0): set("ABCDEF"),
    (1, 0): set("ABCDEF"),
    (0, 1): set("ABCDEF"),
    (2, 0): set("BCDEF"),
    (1, 1): set("ABCDEF"),
    (0, 2): set("ABDE"),
    (3, 0): set("BCEF"),
    (2, 1): set("BCDEF"),
    (1, 2): set("ABDE"),
    (3, 1): set("BCEF"),
    (2, 2): set("BDE"),
}


@pytest.fixture
def toy():
    return mcrank.example_network()


@pytest.fixture
def toy_path():
    return mcrank.example_path()


def random_multiplex(rng, max_nodes=12, layers=(2, 3), density=(0.15, 0.6)):
    """Small G(n, p) multiplex network driven by a numpy Generator."""
    n = int(rng.integers(1, max_nodes + 1))
    n_layers = int(rng.integers(layers[0], layers[1] + 1))
    edges = []
    for a in range(n_layers):
        p = rng.uniform(*density)
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < p:
                    edges.append((str(a + 1), f"n{i}", f"n{j}"))
    return MultiplexNetwork.from_edges(
        edges, node_labels=[f"n{i}" for i in range(n)], layer_labels=[str(a + 1) for a in range(n_layers)]
    )


def labels_of(net, nodes):
    return {net.node_labels[v] for v in nodes}
