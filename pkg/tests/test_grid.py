import pytest

from monopoly_lab.domain.engine import activate
from monopoly_lab.domain.errors import InvalidParameterError
from monopoly_lab.domain.graph import Graph, GridCoord, cycle
from monopoly_lab.domain.thresholds import constant_threshold
from monopoly_lab.services import constructions
from monopoly_lab.ui.grid import render_grid, render_grid_rich, render_round, render_trace


def test_grid_is_row_major():
    c = constructions.dyn_cycle_complete_t2(4)
    assert render_grid(c.graph, c.vertex_set) == "*...\n....\n..*.\n...*\n"


def test_custom_characters(k3k3):
    assert render_grid(k3k3, [4], member="#", empty="-") == "---\n-#-\n---\n"
    assert render_grid_rich(k3k3, [4]).plain == "...\n.*.\n...\n"


def test_round_snapshot_marks_join_round(k3k3):
    trace = activate(k3k3, constant_threshold(k3k3, 2), [0, 4])
    assert render_round(k3k3, trace, 1).plain == "01.\n10.\n...\n"


def test_trace_has_one_block_per_round(k3k3):
    trace = activate(k3k3, constant_threshold(k3k3, 2), [0, 4])
    text = render_trace(k3k3, trace)
    assert text.count("round ") == len(trace.layers)
    assert text.startswith("round 0:\n0..\n.0.\n...\n")


def test_unlabeled_graph_cannot_be_drawn():
    with pytest.raises(InvalidParameterError):
        render_grid(cycle(4), [0])


def _reversed(g):
    last = g.vertex_count - 1
    return Graph.from_edges(
        g.vertex_count,
        [(last - u, last - v) for u, v in g.edges()],
        name=g.name,
        labels=tuple(reversed(g.labels)),
        shape=g.shape,
    )


def test_cells_follow_the_graph_labels(c3k3):
    flipped = _reversed(c3k3)
    corner = flipped.vertex_at(GridCoord(1, 1))
    assert corner == 8
    assert render_grid(flipped, [corner]) == "*..\n...\n...\n"
    assert render_grid_rich(flipped, [corner]).plain == "*..\n...\n...\n"
    seed = [corner, flipped.vertex_at(GridCoord(2, 2))]
    trace = activate(flipped, constant_threshold(flipped, 2), seed)
    assert render_round(flipped, trace, 1).plain == "01.\n10.\n...\n"
