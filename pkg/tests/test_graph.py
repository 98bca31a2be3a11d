import networkx as nx
import pytest

from monopoly_lab.domain.errors import InvalidParameterError, ParseError
from monopoly_lab.domain.graph import (
    Graph,
    GridCoord,
    cartesian_product,
    complete,
    complete_bipartite,
    cycle,
    line_graph,
    parse_edge_list,
    parse_graph_spec,
    star,
    to_edge_list,
)


def test_generators_have_expected_sizes():
    assert (cycle(5).vertex_count, cycle(5).edge_count) == (5, 5)
    assert complete(4).edge_count == 6
    assert star(3).degrees == (3, 1, 1, 1)
    assert complete_bipartite(2, 3).edge_count == 6


@pytest.mark.parametrize("build, arg", [(cycle, 2), (complete, 0), (star, 0)])
def test_generators_reject_small_sizes(build, arg):
    with pytest.raises(InvalidParameterError):
        build(arg)


def test_product_labels_rows_by_first_factor():
    g = cartesian_product(cycle(5), complete(4))
    assert g.shape == (5, 4)
    assert g.name == "C5□K4"
    assert g.vertex_count == 20
    # C_m□K_n is (n+1)-regular
    assert set(g.degrees) == {5}
    v = g.vertex_at(GridCoord(2, 3))
    assert g.coord_of(v) == GridCoord(2, 3)
    assert v == 1 * 4 + 2


def test_product_adjacency_follows_factors():
    g = cartesian_product(cycle(4), complete(3))
    v = g.vertex_at(GridCoord(1, 1))
    nbrs = {g.coord_of(u) for u in g.neighbors(v)}
    assert nbrs == {GridCoord(1, 2), GridCoord(1, 3), GridCoord(2, 1), GridCoord(4, 1)}


def test_coordinates_outside_grid_are_rejected():
    g = cartesian_product(complete(2), complete(2))
    with pytest.raises(InvalidParameterError):
        g.vertex_at(GridCoord(3, 1))
    with pytest.raises(InvalidParameterError):
        cycle(4).coord_of(0)


def test_line_graph_of_complete_bipartite_is_rook_graph():
    lg = line_graph(complete_bipartite(3, 3))
    kk = cartesian_product(complete(3), complete(3))
    assert nx.is_isomorphic(lg.to_networkx(), kk.to_networkx())


def test_line_graph_of_edgeless_graph_fails():
    with pytest.raises(InvalidParameterError):
        line_graph(Graph.from_edges(3, []))


def test_graph_rejects_bad_edges():
    with pytest.raises(InvalidParameterError):
        Graph.from_edges(3, [(0, 0)])
    with pytest.raises(InvalidParameterError):
        Graph.from_edges(3, [(0, 1), (1, 0)])
    with pytest.raises(InvalidParameterError):
        Graph.from_edges(2, [(0, 2)])


def test_edge_list_text_round_trip():
    g = cycle(4)
    text = to_edge_list(g)
    assert text.splitlines()[0] == "4 4"
    assert parse_edge_list(text).edges() == g.edges()


def test_edge_list_errors_carry_line_numbers():
    with pytest.raises(ParseError) as err:
        parse_edge_list("3 2\n0 1\n1 x\n")
    assert err.value.line == 3
    with pytest.raises(ParseError):
        parse_edge_list("3 2\n0 1\n")
    with pytest.raises(ParseError):
        parse_edge_list("")


def test_edge_list_skips_comments_and_blanks():
    g = parse_edge_list("# triangle\n3 3\n\n0 1\n1 2 # closing soon\n0 2\n")
    assert g.edge_count == 3


@pytest.mark.parametrize(
    "spec, vertices, shape",
    [
        ("C5", 5, None),
        ("K4", 4, None),
        ("S3", 4, None),
        ("K2,3", 5, None),
        ("C5xK4", 20, (5, 4)),
        ("K3□K3", 9, (3, 3)),
        ("L(K3,3)", 9, None),
    ],
)
def test_graph_specs(spec, vertices, shape):
    g = parse_graph_spec(spec)
    assert g.vertex_count == vertices
    assert g.shape == shape


def test_shorthand_wins_over_a_file_of_the_same_name(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    (tmp_path / "K4").write_text(to_edge_list(cycle(3)))
    (tmp_path / "triangle.txt").write_text(to_edge_list(cycle(3)))
    assert parse_graph_spec("K4").edge_count == 6
    assert parse_graph_spec("triangle.txt").edge_count == 3


def test_bad_graph_spec():
    with pytest.raises(ParseError):
        parse_graph_spec("Q7")
    with pytest.raises(ParseError):
        parse_graph_spec("C3,4")
