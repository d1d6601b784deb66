import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entropy_flow import GraphError, Partition, build_graph, connected_components, shells
from entropy_flow.graph import Graph, check_weights

from conftest import corpus


def to_nx(graph, mask=None):
    g = nx.Graph()
    g.add_nodes_from(range(graph.n))
    edges = graph.edges if mask is None else graph.edges[mask]
    g.add_edges_from(edges.tolist())
    return g


def test_build_graph_indexes_by_first_appearance():
    g, w = build_graph([("b", "a"), ("a", "c", 2.5)])
    assert g.names == ("b", "a", "c")
    assert g.edges.tolist() == [[0, 1], [1, 2]]
    assert w.tolist() == [1.0, 2.5]
    assert g.edge_index(2, 1) == 1
    assert g.edge_names(1) == ("a", "c")


def test_isolated_vertices_come_first():
    g, _ = build_graph([("x", "y")], vertices=["z"])
    assert g.names == ("z", "x", "y")
    assert g.neighbors(0) == []


@pytest.mark.parametrize("records", [
    [("a", "a")],
    [("a", "b"), ("b", "a")],
    [("a", "b", 0.0)],
    [("a", "b", -1)],
    [("a", "b", float("nan"))],
    [("a",)],
])
def test_bad_records_rejected(records):
    with pytest.raises(GraphError):
        build_graph(records)


def test_check_weights_shape_and_sign():
    g, w = build_graph([("a", "b"), ("b", "c")])
    with pytest.raises(GraphError):
        check_weights(g, w[:1])
    with pytest.raises(GraphError):
        check_weights(g, np.array([1.0, 0.0]))
    with pytest.raises(GraphError):
        check_weights(g, np.array([1.0, np.inf]))


def test_directed_arrays_cover_both_orientations():
    g, _ = build_graph([("a", "b"), ("b", "c")])
    tail, head, eid = g.directed_arrays()
    assert sorted(zip(tail.tolist(), head.tolist(), eid.tolist())) == [
        (0, 1, 0), (1, 0, 0), (1, 2, 1), (2, 1, 1)]
    assert g.degrees().tolist() == [1, 2, 1]


def test_shells_match_networkx_distances():
    for g, _ in corpus(60, 25, seed=3):
        nxg = to_nx(g)
        for x in range(0, g.n, 3):
            sh = shells(g, x)
            ref = nx.single_source_shortest_path_length(nxg, x)
            assert {v: j for v, j in enumerate(sh.shell_of) if j is not None} == ref
            for j, layer in enumerate(sh.shells):
                assert sorted(layer) == sorted(v for v, d in ref.items() if d == j)
            assert sh.depth == max(ref.values())


def test_shells_outside_component_are_unassigned():
    g, _ = build_graph([("a", "b"), ("c", "d")])
    sh = shells(g, 0)
    assert sh.shell_of == [0, 1, None, None] or tuple(sh.shell_of) == (0, 1, None, None)


def test_connected_components_against_networkx():
    rng = np.random.default_rng(5)
    for g, _ in corpus(40, 20, seed=9):
        mask = rng.random(g.m) < 0.6
        part = connected_components(g, mask)
        ref = nx.connected_components(to_nx(g, mask))
        assert sorted(map(sorted, part.blocks())) == sorted(map(sorted, ref))
        # ids follow the smallest member
        firsts = [min(b) for b in part.blocks()]
        assert firsts == sorted(firsts)


def test_partition_validation_and_relabel():
    p = Partition.from_labels(["x", "y", "x", "z"])
    assert p.labels.tolist() == [0, 1, 0, 2]
    assert p.num_communities == 3
    assert len(p) == 4
    assert p == Partition(np.array([0, 1, 0, 2]))
    with pytest.raises(ValueError):
        Partition(np.array([0, 2]))
    with pytest.raises(ValueError):
        Partition(np.array([-1, 0]))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 9), st.integers(0, 9)), max_size=30))
def test_union_find_oracle(pairs):
    pairs = sorted({tuple(sorted(p)) for p in pairs if p[0] != p[1]})
    g, _ = build_graph(pairs, vertices=[str(i) for i in range(10)])
    parent = list(range(10))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in pairs:
        parent[find(u)] = find(v)
    part = connected_components(g)
    for u in range(10):
        for v in range(10):
            same = part.labels[g.index[str(u)]] == part.labels[g.index[str(v)]]
            assert same == (find(u) == find(v))


def test_graph_from_pairs_rejects_out_of_range():
    with pytest.raises(GraphError):
        Graph.from_pairs(["a"], [(0, 1)])
