"""Core lattice decomposition and MultiCoreRank influence for multiplex networks."""
from importlib import resources

from .attack import AttackPlan, AttackTrace, DecayFit, LatticeBudget, assortativity_at_removals, fit_decay, run_attack
from .influence import InfluenceTable, core_influence, propagate, rank
from .lattice import Core, CoreLattice, LatticeBudgetExceeded, build_lattice, core_count, k_core, peel_within
from .metrics import (
    assortativity,
    betweenness_centrality,
    closeness_centrality,
    degree_centrality,
    eigenvector_centrality,
    spearman,
)
from .multiplex import MultiplexNetwork, generate_synthetic, load_network, save_network

__version__ = "0.1.0"


def example_path() -> str:
    """Path of the bundled six-node, two-layer example network."""
    return str(resources.files(__name__).joinpath("data/example.edges"))


def example_network() -> MultiplexNetwork:
    return load_network(example_path())
