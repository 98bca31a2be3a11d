import pytest

from monopoly_lab.domain.engine import (
    ActivationTrace,
    Kind,
    VertexSet,
    activate,
    activate_in_order,
    closure,
    full_mask,
    is_dynamic_monopoly,
    is_static_monopoly,
    verifies,
)
from monopoly_lab.domain.errors import InvalidParameterError
from monopoly_lab.domain.graph import GridCoord, cycle
from monopoly_lab.domain.thresholds import constant_threshold, simple_majority


def test_vertex_set_mask_and_coords(k3k3):
    s = VertexSet.from_coords(k3k3, [(1, 1), GridCoord(3, 3)])
    assert s.sorted() == [0, 8]
    assert VertexSet.from_mask(s.mask) == s
    assert s.cells(k3k3) == [GridCoord(1, 1), GridCoord(3, 3)]
    assert 8 in s and 4 not in s
    assert s.without(8).sorted() == [0]


def test_activation_layers_on_a_cycle():
    g = cycle(6)
    trace = activate(g, constant_threshold(g, 1), [0])
    assert trace.layers == (frozenset({0}), frozenset({1, 5}), frozenset({2, 4}), frozenset({3}))
    assert trace.rounds == 3
    assert trace.complete
    assert trace.active_after(1) == frozenset({0, 1, 5})
    assert trace.replay(g, constant_threshold(g, 1)) is None


def test_activation_can_stall():
    g = cycle(6)
    trace = activate(g, constant_threshold(g, 2), [0, 3])
    assert trace.rounds == 0
    assert not trace.complete


def test_seed_out_of_range():
    with pytest.raises(InvalidParameterError):
        activate(cycle(4), constant_threshold(cycle(4), 1), [9])


def test_replay_catches_a_bad_layer():
    g = cycle(6)
    tau = constant_threshold(g, 2)
    forged = ActivationTrace((frozenset({0}), frozenset({1})), 6)
    assert "vertex 1" in forged.replay(g, tau)


def test_closure_matches_synchronous_rounds(k3k3):
    tau = constant_threshold(k3k3, 3)
    seed = VertexSet.from_coords(k3k3, [(1, 1), (1, 2), (2, 1), (2, 2)])
    assert VertexSet.from_mask(closure(k3k3, tau, seed.mask)).members == activate(k3k3, tau, seed).activated


def test_schedule_does_not_change_the_fixed_point(c3k3):
    tau = constant_threshold(c3k3, 2)
    seed = VertexSet.of([0, 4])
    sync = activate(c3k3, tau, seed).activated
    assert activate_in_order(c3k3, tau, seed, list(reversed(range(9)))) == sync


def test_static_monopoly_reports_a_witness(k3k3):
    tau = simple_majority(k3k3)
    diagonal = VertexSet.from_coords(k3k3, [(1, 1), (2, 2), (3, 3)])
    assert is_static_monopoly(k3k3, tau, diagonal)
    check = is_static_monopoly(k3k3, tau, diagonal.without(0))
    assert not check
    assert (check.witness, check.have) == (0, 0)
    assert check.need == 2


def test_every_static_monopoly_is_a_dynamo(k3k3):
    tau = constant_threshold(k3k3, 2)
    diagonal = VertexSet.from_coords(k3k3, [(1, 1), (2, 2), (3, 3)])
    assert verifies(k3k3, tau, diagonal, Kind.MONOPOLY)
    assert verifies(k3k3, tau, diagonal, Kind.DYNAMO)
    rest = frozenset(range(k3k3.vertex_count)) - diagonal.members
    assert activate(k3k3, tau, diagonal).layers == (diagonal.members, rest)
    assert is_dynamic_monopoly(k3k3, tau, VertexSet.from_coords(k3k3, [(1, 1), (2, 2)]))


def test_full_set_is_always_both(c3k3):
    tau = constant_threshold(c3k3, 4)
    everything = VertexSet.from_mask(full_mask(c3k3))
    assert verifies(c3k3, tau, everything, Kind.MONOPOLY)
    assert verifies(c3k3, tau, everything, Kind.DYNAMO)
