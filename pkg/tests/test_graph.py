"""Graph construction, edge-list parsing, Laplacian, connectivity."""

import numpy as np
import pytest

from modembed import (
    FormatError,
    Graph,
    is_connected,
    laplacian,
    load_edge_list,
    write_id_map,
)

from helpers import path3, random_connected_graph, triangle


def test_parse_two_edges():
    g = load_edge_list("a b\nb c")
    assert g.n == 3
    assert g.edges == ((0, 1, 1.0), (1, 2, 1.0))
    assert g.ids == ("a", "b", "c")


def test_parse_merges_duplicate_edges():
    g = load_edge_list("a b 2\na b 3")
    assert g.edges == ((0, 1, 5.0),)


def test_parse_rejects_self_loop():
    with pytest.raises(FormatError):
        load_edge_list("a a")


@pytest.mark.parametrize("text", ["a", "a b c d", "a b x", "a b 0", "a b -1"])
def test_parse_rejects_malformed_lines(text):
    with pytest.raises(FormatError):
        load_edge_list(text)


def test_parse_reports_line_number():
    with pytest.raises(FormatError, match="line 3"):
        load_edge_list("# comment\na b\nc c")


def test_comments_and_blank_lines_ignored():
    g = load_edge_list("# header\n\na b 1.5\nb c\n")
    assert g.edges == ((0, 1, 1.5), (1, 2, 1.0))


def test_ids_interned_in_first_appearance_order():
    g = load_edge_list("z y\ny x")
    assert g.ids == ("z", "y", "x")
    assert g.index_of("x") == 2
    with pytest.raises(KeyError):
        g.index_of("w")


def test_from_edges_canonical_order():
    g = Graph.from_edges([(2, 1, 1.0), (1, 0, 2.0)])
    assert g.edges == ((0, 1, 2.0), (1, 2, 1.0))


def test_from_edges_merges_reversed_duplicates():
    g = Graph.from_edges([(0, 1, 1.5), (1, 0, 2.5)])
    assert g.edges == ((0, 1, 4.0),)


def test_isolated_node_rejected():
    with pytest.raises(ValueError):
        Graph.from_edges([(0, 1, 1.0)], n=3)


def test_single_node_graph_allowed():
    g = Graph.from_edges([], n=1)
    assert g.n == 1
    assert g.edges == ()


def test_adjacency_and_degrees():
    g = triangle()
    a = g.adjacency
    assert np.array_equal(a, a.T)
    np.testing.assert_array_equal(g.degrees, [2.0, 2.0, 2.0])
    assert g.edge_count == 3
    assert g.total_weight == 6.0  # total degree, twice the edge-weight sum


def test_adjacency_is_read_only():
    with pytest.raises(ValueError):
        triangle().adjacency[0, 1] = 9.0


def test_laplacian_single_edge():
    g = Graph.from_edges([(0, 1, 1.0)])
    np.testing.assert_array_equal(laplacian(g), [[1.0, -1.0], [-1.0, 1.0]])


def test_laplacian_path():
    expected = [[1.0, -1.0, 0.0], [-1.0, 2.0, -1.0], [0.0, -1.0, 1.0]]
    np.testing.assert_array_equal(laplacian(path3()), expected)


def test_laplacian_triangle():
    lap = laplacian(triangle())
    np.testing.assert_array_equal(np.diag(lap), [2.0, 2.0, 2.0])
    assert lap[0, 1] == -1.0


def test_laplacian_rows_sum_to_zero():
    rng = np.random.default_rng(7)
    for _ in range(5):
        g = random_connected_graph(rng, int(rng.integers(2, 40)), weighted=True)
        assert np.abs(laplacian(g).sum(axis=1)).max() <= 1e-12


def test_connectivity():
    assert is_connected(path3())
    assert not is_connected(Graph.from_edges([(0, 1, 1.0), (2, 3, 1.0)]))
    assert is_connected(Graph.from_edges([], n=1))


def test_write_id_map(tmp_path):
    g = load_edge_list("b a\na c")
    out = tmp_path / "ids.tsv"
    write_id_map(g, out)
    assert out.read_text() == "b\t0\na\t1\nc\t2\n"
