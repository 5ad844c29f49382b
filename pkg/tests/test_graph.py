import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import network_from_edges, random_edges
from oracles import bfs_labels, union_find_count
from seedrank.graph import (
    NetworkFormatError,
    NoSeedsMappedError,
    connected_components,
    load_network,
    map_seeds,
    parse_edge_lines,
    prune_isolated,
    read_network,
    write_network,
)


def test_minimal_edge():
    net = load_network([("A", "B", 0.8)])
    assert net.node_count == 2 and net.edge_count == 1
    assert net.weight(0, 1) == net.weight(1, 0) == 0.8


def test_duplicate_merge_keeps_max():
    net = load_network([("A", "B", 0.8), ("B", "A", 0.6)])
    assert net.edge_count == 1
    assert net.weight(0, 1) == 0.8
    net = load_network([("A", "B", 0.6), ("A", "B", 0.8)])
    assert net.weight(0, 1) == 0.8


def test_self_loop_skipped_with_warning():
    with pytest.warns(UserWarning, match="self-loop"):
        net = load_network([("A", "A", 1.0)])
    assert net.node_count == 0
    assert net.skipped_self_loops == 1


@pytest.mark.parametrize("w", [0.0, -0.3, float("nan"), float("inf"), 1.5])
def test_bad_weights_rejected(w):
    with pytest.raises(NetworkFormatError):
        load_network([("A", "B", w)])


def test_index_by_first_appearance():
    net = load_network([("C", "A", 0.5), ("B", "C", 0.5)])
    assert net.ids == ("C", "A", "B")


def test_parse_reports_line_number():
    lines = ["# header\n", "A\tB\t0.5\n", "A\tB\n"]
    with pytest.raises(NetworkFormatError, match="line 3"):
        parse_edge_lines(lines)
    with pytest.raises(NetworkFormatError, match="line 1"):
        parse_edge_lines(["A\tB\tabc\n"])


def test_prune():
    net = load_network([("A", "B", 0.5)], extra_nodes=["C"])
    pruned, removed = prune_isolated(net)
    assert pruned.ids == ("A", "B") and removed == 1
    empty, removed = prune_isolated(load_network([], extra_nodes=["A", "B"]))
    assert empty.node_count == 0 and removed == 2


def test_components_small():
    net = load_network([("A", "B", 1.0)], extra_nodes=["C"])
    assert connected_components(net)[1] == 2
    net = load_network([("A", "B", 1.0), ("B", "C", 1.0)])
    assert connected_components(net)[1] == 1


def test_components_match_bfs_partition(rng):
    n = 50
    edges = random_edges(rng, n, 0.03)
    net = network_from_edges(n, edges)
    labels, count = connected_components(net)
    ref, ref_count = bfs_labels(n, edges)
    assert count == ref_count
    # same partition up to relabeling
    pairs = set(zip(labels.tolist(), ref))
    assert len(pairs) == count


def test_component_count_union_find_1000_graphs():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        n = int(rng.integers(1, 101))
        edges = random_edges(rng, n, float(rng.uniform(0, 0.08)))
        net = network_from_edges(n, edges)
        assert connected_components(net)[1] == union_find_count(n, edges)


def test_map_seeds():
    net = load_network([("A", "B", 1.0), ("B", "C", 1.0)])
    s = map_seeds(net, ["A", "B"])
    assert s.indices == (0, 1) and s.unmapped_ids == ()
    s = map_seeds(net, ["A", "Z"])
    assert s.indices == (0,) and s.unmapped_ids == ("Z",)
    with pytest.raises(NoSeedsMappedError):
        map_seeds(net, ["Z"])


edge_lists = st.lists(
    st.tuples(
        st.integers(0, 15),
        st.integers(0, 15),
        st.floats(0.001, 1.0, allow_nan=False),
    ),
    max_size=40,
)


@settings(max_examples=60, deadline=None)
@given(edge_lists)
def test_roundtrip_and_symmetry(tmp_path_factory, edges):
    import warnings

    records = [(f"g{a}", f"g{b}", w) for a, b, w in edges]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        net = load_network(records, extra_nodes=["lonely"])
    a = net.adjacency
    assert (a != a.T).nnz == 0
    assert a.diagonal().sum() == 0

    path = tmp_path_factory.mktemp("rt") / "edges.tsv"
    write_network(net, path)
    back = read_network(path)
    assert set(back.ids) == set(net.ids)
    perm = [back.index[g] for g in net.ids]
    assert (back.adjacency[perm][:, perm] != net.adjacency).nnz == 0

    once, _ = prune_isolated(net)
    twice, removed = prune_isolated(once)
    assert removed == 0 and twice.ids == once.ids
    assert (twice.adjacency != once.adjacency).nnz == 0
    assert np.all(once.degree() >= 1)
