import pytest

from monopoly_lab.data import dao
from monopoly_lab.domain.engine import Kind, VertexSet, verifies
from monopoly_lab.domain.errors import InvalidParameterError
from monopoly_lab.domain.graph import cartesian_product, complete, cycle, star
from monopoly_lab.domain.thresholds import ThresholdAssignment, constant_threshold
from monopoly_lab.services.solver import (
    SearchBudget,
    SolveStatus,
    cached_solve,
    instance_fingerprint,
    min_dynamo,
    min_dynamo_lb_pruned,
    min_monopoly,
    solve,
)


@pytest.mark.parametrize(
    "rows, cols, t, kind, expected",
    [
        ("C3", "C3", 2, Kind.MONOPOLY, 3),
        ("K3", "K3", 2, Kind.MONOPOLY, 3),
        ("C4", "K4", 2, Kind.DYNAMO, 3),
        ("C3", "K3", 3, Kind.DYNAMO, 4),
        ("K3", "K3", 4, Kind.DYNAMO, 6),
        ("K2", "K5", 5, Kind.DYNAMO, 8),
    ],
)
def test_small_optima(rows, cols, t, kind, expected):
    factors = {"C3": cycle(3), "C4": cycle(4), "K2": complete(2), "K3": complete(3), "K4": complete(4), "K5": complete(5)}
    g = cartesian_product(factors[rows], factors[cols])
    tau = constant_threshold(g, t)
    result = solve(g, tau, kind)
    assert result.status is SolveStatus.SOLVED
    assert result.optimum == expected
    assert result.lower_bound == result.upper_bound == expected
    assert verifies(g, tau, result.witness, kind)


def test_witness_is_lexicographically_first(k3k3):
    result = min_dynamo(k3k3, constant_threshold(k3k3, 2))
    assert result.witness.sorted() == [0, 4]


def test_parallel_search_matches_sequential(k3k3):
    tau = constant_threshold(k3k3, 3)
    sequential = min_dynamo(k3k3, tau)
    parallel = min_dynamo(k3k3, tau, threads=2)
    assert parallel.optimum == sequential.optimum == 4
    assert parallel.witness == sequential.witness


def test_parallel_search_stops_at_the_time_limit():
    g = cartesian_product(cycle(4), complete(4))
    tau = constant_threshold(g, 4)
    result = solve(g, tau, Kind.DYNAMO, budget=SearchBudget(time_limit_seconds=0.0), threads=2)
    assert result.status is SolveStatus.INCONCLUSIVE
    assert result.explored == g.vertex_count
    assert result.lower_bound == 2


def test_budget_gives_inconclusive(k3k3):
    result = min_monopoly(k3k3, constant_threshold(k3k3, 2), budget=SearchBudget(max_candidates=1))
    assert result.status is SolveStatus.INCONCLUSIVE
    assert not result.solved
    assert result.optimum is None
    assert result.lower_bound == 1
    assert result.upper_bound == 9


def test_upper_hint_tightens_inconclusive_range(k3k3):
    tau = constant_threshold(k3k3, 2)
    hint = VertexSet.from_coords(k3k3, [(1, 1), (2, 2), (3, 3)])
    result = solve(k3k3, tau, Kind.MONOPOLY, budget=SearchBudget(max_candidates=1), upper_hint=hint)
    assert result.upper_bound == 3


def test_forced_vertices_are_always_chosen():
    g = cartesian_product(star(3), star(3))
    tau = constant_threshold(g, 3, allow_excess=True)
    result = min_dynamo(g, tau)
    assert result.optimum == 9
    assert tau.forced(g) <= result.witness.members
    assert result.explored == 1


def test_lower_bound_start(k3k3):
    tau = constant_threshold(k3k3, 4)
    assert min_dynamo_lb_pruned(k3k3, tau, lb=6).optimum == 6
    with pytest.raises(InvalidParameterError):
        min_dynamo_lb_pruned(k3k3, tau, lb=10)


def test_threshold_length_must_match(k3k3):
    with pytest.raises(InvalidParameterError):
        solve(k3k3, ThresholdAssignment((1, 1)), Kind.DYNAMO)


def test_fingerprint_depends_on_thresholds(k3k3):
    assert instance_fingerprint(k3k3, constant_threshold(k3k3, 2)) != instance_fingerprint(
        k3k3, constant_threshold(k3k3, 3)
    )


def test_cached_solve_round_trips_through_the_database(session, k3k3):
    tau = constant_threshold(k3k3, 3)
    first = cached_solve(session, k3k3, tau, Kind.DYNAMO)
    second = cached_solve(session, k3k3, tau, Kind.DYNAMO)
    assert second.optimum == first.optimum == 4
    assert second.witness == first.witness
    records = dao.list_solves(session)
    assert len(records) == 1
    assert records[0].graph_name == "K3□K3"


def test_inconclusive_results_are_not_cached(session, k3k3):
    tau = constant_threshold(k3k3, 3)
    cached_solve(session, k3k3, tau, Kind.DYNAMO, budget=SearchBudget(max_candidates=2))
    assert dao.list_solves(session) == []


def test_cached_solve_without_session(k3k3):
    assert cached_solve(None, k3k3, constant_threshold(k3k3, 2), Kind.MONOPOLY).optimum == 3
