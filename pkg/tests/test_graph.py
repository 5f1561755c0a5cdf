from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qwsearch.errors import GraphFormatError, InvalidGraphError, SymmetryError
from qwsearch.graph import (
    Graph,
    adjacency_matrix,
    complete_graph,
    cycle_graph,
    cyclepair_size,
    example2_graph,
    load_graph,
    parse_edge_list,
    store_graph,
)
from qwsearch.hermitian import HermitianMatrix


@pytest.mark.parametrize("n,m", [(2, 1), (4, 6), (100, 4950)])
def test_complete_graph_edge_count(n, m):
    g = complete_graph(n)
    assert g.num_edges == m
    assert np.all(g.degrees == n - 1)


def test_complete_graph_k2_single_edge():
    assert complete_graph(2).edges == ((0, 1),)


@pytest.mark.parametrize("n", [0, 1, -3])
def test_complete_graph_rejects_small(n):
    with pytest.raises(ValueError):
        complete_graph(n)


@pytest.mark.parametrize("n", [3, 6, 18])
def test_cycle_graph_two_regular(n):
    g = cycle_graph(n)
    assert g.num_edges == n
    assert np.all(g.degrees == 2)


def test_triangle_is_k3():
    assert cycle_graph(3) == complete_graph(3)


def test_cycle_graph_rejects_two():
    with pytest.raises(ValueError):
        cycle_graph(2)


@pytest.mark.parametrize("k,N", [(1, 343), (2, 2551)])
def test_example2_sizes(k, N):
    assert example2_graph(k).n == N


@pytest.mark.parametrize("k", [1, 2])
def test_example2_degrees_and_edges(k):
    m = cyclepair_size(k)
    g = example2_graph(k)
    deg = g.degrees
    assert deg[0] == m
    assert np.all(deg[1:m + 1] == 2 + 1 + m)
    assert np.all(deg[m + 1:] == 3)
    assert g.num_edges == m + m + m * m + m * m


def test_example2_cross_edges_are_blocks():
    m = cyclepair_size(1)
    g = example2_graph(1)
    outer = [int(v) for v in g.neighbors(1) if v > m]
    assert outer == list(range(m + 1, 2 * m + 1))


def test_example2_rejects_zero():
    with pytest.raises(ValueError):
        example2_graph(0)


def test_graph_rejects_self_loop_and_duplicates():
    with pytest.raises(InvalidGraphError):
        Graph(3, ((1, 1),))
    with pytest.raises(InvalidGraphError):
        Graph(3, ((0, 1), (1, 0)))
    with pytest.raises(InvalidGraphError):
        Graph(3, ((0, 3),))


def test_adjacency_small_cases():
    assert np.array_equal(np.array(adjacency_matrix(complete_graph(2))), [[0, 1], [1, 0]])
    a3 = np.array(adjacency_matrix(cycle_graph(3)))
    assert np.array_equal(a3, np.ones((3, 3)) - np.eye(3))
    assert not np.any(np.array(adjacency_matrix(Graph(4))))


@pytest.mark.parametrize("g", [complete_graph(5), cycle_graph(7), example2_graph(1)])
def test_adjacency_row_sums_are_degrees(g):
    a = np.array(adjacency_matrix(g))
    assert np.array_equal(a.sum(axis=1), g.degrees)
    assert adjacency_matrix(g).is_real


def test_parse_simple():
    g = parse_edge_list("3\n0 1\n1 2")
    assert g == Graph(3, ((0, 1), (1, 2)))


def test_parse_ignores_comments_and_blanks():
    g = parse_edge_list("# header\n3\n\n1 2  # trailing\n0 1\n")
    assert g.edges == ((0, 1), (1, 2))


@pytest.mark.parametrize(
    "text,line",
    [("3\n0 0", 2), ("3\n0 1\n1 0", 3), ("3\n0 5", 2), ("3\n0 x", 2), ("x", 1), ("3\n0 1 2", 2)],
)
def test_parse_errors_carry_line_number(text, line):
    with pytest.raises(GraphFormatError) as info:
        parse_edge_list(text)
    assert info.value.lineno == line
    assert f"line {line}" in str(info.value)


def test_parse_empty_input():
    with pytest.raises(GraphFormatError):
        parse_edge_list("  \n# nothing\n")


@pytest.mark.parametrize("fmt", ["text", "json"])
def test_round_trip_example2(fmt):
    g = example2_graph(1)
    assert load_graph(store_graph(g, fmt)) == g


@st.composite
def graphs(draw, max_n=9):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    return Graph(n, tuple(chosen))


@settings(max_examples=60, deadline=None)
@given(graphs())
def test_round_trip_random(g):
    assert load_graph(store_graph(g)) == g
    assert load_graph(store_graph(g, "json")) == g


@settings(max_examples=60, deadline=None)
@given(graphs())
def test_distances_match_connectivity(g):
    d = g.distances_from(0)
    assert d[0] == 0
    assert g.is_connected() == bool(np.all(d >= 0))


def test_hermitian_symmetrizes_and_rejects():
    h = HermitianMatrix([[1.0, 2.0 + 1e-14], [2.0, 0.0]])
    assert h.entries[0, 1] == h.entries[1, 0]
    with pytest.raises(SymmetryError):
        HermitianMatrix([[0.0, 1.0], [0.0, 0.0]])
    with pytest.raises(SymmetryError):
        HermitianMatrix(np.ones((2, 3)))


def test_hermitian_complex_conjugate_storage():
    h = HermitianMatrix([[0, 1j], [-1j, 0]])
    assert not h.is_real
    assert h.entries[0, 1] == np.conj(h.entries[1, 0])
    assert HermitianMatrix.from_document(h.to_document()) == h
