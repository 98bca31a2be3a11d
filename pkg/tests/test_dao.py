from monopoly_lab.data import dao
from monopoly_lab.data.db import get_engine, session_scope
from monopoly_lab.data.models import SolveRecord


def _save(session, fingerprint="abc", kind="dynamo", optimum=4):
    return dao.save_solve(
        session,
        fingerprint=fingerprint,
        kind=kind,
        optimum=optimum,
        witness=[4, 0, 2],
        explored=17,
        elapsed=0.25,
        vertex_count=9,
        graph_name="K3□K3",
    )


def test_save_and_find_solve(session):
    record = _save(session)
    assert record.witness == "0,2,4"
    assert record.witness_ids == [0, 2, 4]
    found = dao.find_solve(session, "abc", "dynamo")
    assert found is not None and found.optimum == 4
    assert dao.find_solve(session, "abc", "monopoly") is None


def test_duplicate_solve_keeps_the_first_record(session):
    first = _save(session, optimum=4)
    again = _save(session, optimum=5)
    assert again.id == first.id
    assert again.optimum == 4
    assert len(dao.list_solves(session)) == 1


def test_same_instance_different_kind(session):
    _save(session, kind="dynamo")
    _save(session, kind="monopoly")
    assert {r.kind for r in dao.list_solves(session)} == {"dynamo", "monopoly"}


def test_check_run_counts_and_outcomes(session):
    run = dao.record_check_run(
        session,
        "figures",
        7,
        [("a", True, ""), ("b", False, "size 3, expected 4"), ("c", True, "ok")],
    )
    assert (run.passed, run.failed) == (2, 1)
    failed = dao.outcomes_for_run(session, run.id, failed_only=True)
    assert [o.instance for o in failed] == ["b"]
    assert failed[0].detail == "size 3, expected 4"
    assert len(dao.outcomes_for_run(session, run.id)) == 3


def test_list_check_runs_filters_by_bundle(session):
    dao.record_check_run(session, "figures", 1, [("a", True, "")])
    dao.record_check_run(session, "sandwich", 1, [("b", True, "")])
    latest = dao.record_check_run(session, "figures", 2, [("c", True, "")])
    runs = dao.list_check_runs(session, bundle="figures")
    assert [r.bundle for r in runs] == ["figures", "figures"]
    assert runs[0].id == latest.id
    assert len(dao.list_check_runs(session)) == 3


def test_session_scope_commits(tmp_path):
    engine = get_engine(tmp_path / "scope.db")
    with session_scope(engine) as session:
        dao.init_db(session)
        _save(session)
    with session_scope(engine) as session:
        assert session.query(SolveRecord).count() == 1
