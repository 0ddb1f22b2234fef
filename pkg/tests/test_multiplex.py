import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_multiplex
from mcrank import metrics
from mcrank.multiplex import (
    GenerationError,
    _configuration_edges,
    MultiplexNetwork,
    NetworkParseError,
    format_network,
    generate_synthetic,
    load_network,
    parse_network,
    random_network,
    save_network,
)


def test_load_small_file(tmp_path):
    f = tmp_path / "net.edges"
    f.write_text("1 A B\n1 B C\n2 A B\n")
    net = load_network(f)
    assert net.node_count == 3
    assert net.layer_count == 2
    assert net.node_labels == ("A", "B", "C")
    assert net.labeled_edges(0) == {frozenset("AB"), frozenset("BC")}
    assert net.labeled_edges(1) == {frozenset("AB")}


def test_toy_shape(toy):
    assert toy.node_count == 6
    # the repeated C-F line collapses
    assert toy.edge_count(0) == 9
    assert toy.edge_count(1) == 7


def test_comments_weights_and_blank_lines():
    net = parse_network("# header\n% other comment\n\nL1 x y 0.5\nL2 y z 3\n")
    assert net.layer_labels == ("L1", "L2")
    assert net.edge_count() == 2


@pytest.mark.parametrize("text, line", [
    ("1 A B\n1 A A\n", 2),
    ("1 A B\n1 A\n", 2),
    ("1 A B C D\n", 1),
    ("# c\n1 A B notaweight\n", 2),
])
def test_parse_errors_report_line(text, line):
    with pytest.raises(NetworkParseError) as err:
        parse_network(text, "f.edges")
    assert err.value.line == line
    assert f"f.edges:{line}:" in str(err.value)


def test_self_loop_message():
    with pytest.raises(NetworkParseError, match="self-loop"):
        parse_network("1 A A\n")


def test_empty_file_rejected(tmp_path):
    f = tmp_path / "empty.edges"
    f.write_text("# only a comment\n")
    with pytest.raises(NetworkParseError):
        load_network(f)


def test_degree_vector(toy):
    b, f = toy.node_index["B"], toy.node_index["F"]
    assert toy.degree_vector(0)[b] == 5
    assert toy.degree_vector(1)[f] == 1
    np.testing.assert_array_equal(toy.degree_vector(0), [1, 5, 3, 2, 4, 3])
    np.testing.assert_array_equal(toy.degree_vector(1), [2, 3, 1, 3, 4, 1])
    with pytest.raises(IndexError):
        toy.degree_vector(2)


def test_empty_layer_degrees():
    net = MultiplexNetwork.from_edges([("1", "a", "b")], layer_labels=["1", "2"])
    np.testing.assert_array_equal(net.degree_vector(1), [0, 0])


def test_remove_b_gives_expected_residual(toy):
    residual = toy.remove_labels(["B"])
    pair = lambda s: frozenset(s)
    assert residual.labeled_edges(0) == {pair("CE"), pair("CF"), pair("DE"), pair("EF")}
    assert residual.labeled_edges(1) == {pair("AD"), pair("CE"), pair("DE"), pair("EF")}
    assert residual.node_labels == ("A", "C", "D", "E", "F")
    # original untouched
    assert toy.edge_count() == 16


def test_remove_nothing_and_everything(toy):
    assert toy.remove_nodes([]) == toy
    empty = toy.remove_nodes(range(toy.node_count))
    assert empty.node_count == 0
    assert [empty.edge_count(a) for a in range(2)] == [0, 0]


def test_remove_out_of_range(toy):
    with pytest.raises(IndexError):
        toy.remove_nodes([6])


def test_save_round_trip(toy, tmp_path):
    path = tmp_path / "out.edges"
    save_network(toy, path)
    assert path.read_text().startswith("# node_count=6 layer_count=2\n")
    again = load_network(path)
    assert again.layer_labels == toy.layer_labels
    for a in range(2):
        assert again.labeled_edges(a) == toy.labeled_edges(a)


nets = st.integers(0, 2**32 - 1).map(lambda s: random_multiplex(np.random.default_rng(s)))


@settings(max_examples=60, deadline=None)
@given(nets)
def test_degree_sum_is_twice_edges(net):
    for a in range(net.layer_count):
        assert net.degree_vector(a).sum() == 2 * net.edge_count(a)


@settings(max_examples=60, deadline=None)
@given(nets, st.data())
def test_removal_is_order_independent(net, data):
    labels = list(net.node_labels)
    s = data.draw(st.sets(st.sampled_from(labels)) if labels else st.just(set()))
    t = data.draw(st.sets(st.sampled_from(labels)) if labels else st.just(set()))
    stepwise = net.remove_labels(s).remove_labels(t - s)
    assert stepwise == net.remove_labels(s | t)


@settings(max_examples=40, deadline=None)
@given(nets)
def test_format_round_trip(net):
    if net.edge_count() == 0:
        return
    again = parse_network(format_network(net))
    for a, layer in enumerate(net.layer_labels):
        if net.edge_count(a):
            assert again.labeled_edges(again.layer_index[layer]) == net.labeled_edges(a)


def test_generator_is_deterministic():
    a = generate_synthetic(60, 2, 0.5, 2.5, seed=3)
    b = generate_synthetic(60, 2, 0.5, 2.5, seed=3)
    assert a == b
    assert a != generate_synthetic(60, 2, 0.5, 2.5, seed=4)


def test_generator_produces_simple_graphs():
    net = generate_synthetic(100, 3, 0.0, 2.5, seed=11)
    for a in range(3):
        for v, nb in enumerate(net.adjacency[a]):
            assert v not in nb
            assert len(set(nb)) == len(nb)


def test_generator_assortative():
    net = generate_synthetic(100, 2, 0.9, 2.5, seed=7)
    assert metrics.assortativity(net).global_ > 0.5


def test_generator_neutral():
    net = generate_synthetic(100, 2, 0.0, 2.5, seed=7)
    assert -0.2 < metrics.assortativity(net).global_ < 0.2


def test_generator_edgeless():
    net = generate_synthetic(2, 2, 0.3, 2.5, seed=1, min_degree=0, max_degree=0)
    assert net.node_count == 2
    assert net.edge_count() == 0


def test_generator_argument_checks():
    with pytest.raises(ValueError):
        generate_synthetic(1, 2, 0.0)
    with pytest.raises(ValueError):
        generate_synthetic(10, 2, 1.5)


def test_configuration_model_rejects_non_graphical_sequence():
    # two degree-3 nodes need three distinct partners each among only three others,
    # but the remaining two nodes have degree 1
    with pytest.raises(GenerationError):
        _configuration_edges(np.random.default_rng(0), np.array([3, 3, 1, 1]), max_rounds=20)


def test_random_network_edge_counts():
    net = random_network(61, [193, 194, 124, 88, 21], seed=2)
    assert [net.edge_count(a) for a in range(5)] == [193, 194, 124, 88, 21]
