import json

import pytest

from monopoly_lab.cli import EXIT_FAILED, EXIT_INCONCLUSIVE, EXIT_OK, EXIT_USAGE, run


@pytest.fixture
def db(tmp_path):
    return ["--db", str(tmp_path / "cli.db")]


def test_gen_edge_list(capsys):
    assert run(["gen", "cycle", "4"]) == EXIT_OK
    assert capsys.readouterr().out.splitlines() == ["4 4", "0 1", "0 3", "1 2", "2 3"]


def test_gen_line_graph_json(capsys):
    assert run(["gen", "complete-bipartite", "3", "3", "--line", "--json"]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["vertex_count"] == 9
    assert len(doc["edges"]) == 18


def test_gen_wrong_arity():
    assert run(["gen", "cycle", "4", "5"]) == EXIT_USAGE


def test_product_writes_file(tmp_path):
    out = tmp_path / "c3k3.json"
    assert run(["product", "C3", "K3", "--json", "-o", str(out)]) == EXIT_OK
    doc = json.loads(out.read_text(encoding="utf-8"))
    assert doc["shape"] == [3, 3]
    assert doc["name"] == "C3□K3"


def test_construct_with_grid(capsys):
    assert run(["construct", "--family", "mon-diag", "--n", "3", "--grid"]) == EXIT_OK
    out = capsys.readouterr().out
    assert '"claimed_size": 3' in out
    assert out.endswith("*..\n.*.\n..*\n")


def test_construct_missing_parameter():
    assert run(["construct", "--family", "mon-cycle-complete", "--m", "4", "--n", "5"]) == EXIT_USAGE


def test_construct_out_of_regime(capsys):
    assert run(["construct", "--family", "dyn-complete-complete", "--m", "2", "--n", "5", "--t", "5"]) == EXIT_USAGE
    assert "m=2" in capsys.readouterr().err


def test_verify_monopoly_pass_and_fail(capsys):
    base = ["verify", "--graph", "K3xK3", "--t", "2", "--kind", "monopoly"]
    assert run([*base, "--cells", "1,1 2,2 3,3"]) == EXIT_OK
    assert "pass" in capsys.readouterr().out
    assert run([*base, "--cells", "1,1 2,2"]) == EXIT_FAILED
    assert "fail" in capsys.readouterr().out


def test_verify_dynamo_by_members(capsys):
    assert run(["verify", "--graph", "K3xK3", "--t", "2", "--kind", "dynamo", "--members", "0,4"]) == EXIT_OK


def test_verify_rejects_threshold_above_degree(capsys):
    code = run(["verify", "--graph", "K3xK3", "--t", "5", "--kind", "dynamo", "--members", "0"])
    assert code == EXIT_USAGE
    assert "exceeds degree" in capsys.readouterr().err


def test_verify_rejects_bad_cells():
    assert run(["verify", "--graph", "K3xK3", "--t", "2", "--kind", "dynamo", "--cells", "1;1"]) == EXIT_USAGE


def test_trace(capsys):
    assert run(["trace", "--graph", "C6", "--t", "1", "--members", "0"]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["rounds"] == 3
    assert doc["complete"] is True


def test_trace_grid(capsys):
    assert run(["trace", "--graph", "K3xK3", "--t", "2", "--cells", "1,1 2,2", "--grid"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "round 0:\n0..\n.0.\n...\n" in out


def test_solve_caches(capsys, db):
    args = [*db, "solve", "--graph", "K3xK3", "--t", "2", "--kind", "dynamo"]
    assert run(args) == EXIT_OK
    first = json.loads(capsys.readouterr().out)
    assert run(args) == EXIT_OK
    second = json.loads(capsys.readouterr().out)
    assert first["optimum"] == second["optimum"] == 2
    assert second["witness"] == [0, 4]


def test_solve_inconclusive(capsys, db):
    args = [*db, "solve", "--graph", "K3xK3", "--t", "3", "--kind", "dynamo", "--max-candidates", "1", "--no-cache"]
    assert run(args) == EXIT_INCONCLUSIVE
    doc = json.loads(capsys.readouterr().out)
    assert doc["status"] == "inconclusive"
    assert doc["optimum"] is None


def test_solve_majority(capsys, db):
    assert run([*db, "solve", "--graph", "L(K3,3)", "--majority", "simple", "--kind", "monopoly"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["optimum"] == 3


def test_bound_by_name(capsys):
    assert run(["bound", "--name", "dyn_product_improved_ub", "--params", "dg=2", "dh=3", "t=3"]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["value"] == "9/2"
    assert doc["certificate"] == 4


def test_bound_out_of_regime_reports_applicability(capsys):
    code = run(["bound", "--name", "biregular_line_lb", "--params", "m=2", "n=5", "r1=5", "r2=2", "t=5"])
    assert code == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["applicable"] is False
    assert doc["value"] is None
    assert "min(m, n)" in doc["reason"]


def test_bound_missing_parameter():
    assert run(["bound", "--name", "small_m_exact", "--params", "m=2"]) == EXIT_USAGE


def test_bound_table(capsys):
    assert run(["bound", "--params", "dg=3", "dh=4", "t=3"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "naive" in out
    assert "improved" in out


def test_bound_bad_parameter():
    assert run(["bound", "--name", "small_m_exact", "--params", "m=two"]) == EXIT_USAGE


def test_check_theorem_json(capsys):
    assert run(["check-theorem", "figures", "--no-db", "--json"]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["bundle"] == "figures"
    assert doc["failed"] == 0


def test_check_theorem_records_run(capsys, db):
    assert run([*db, "check-theorem", "bound-regression"]) == EXIT_OK
    assert "bound-regression" in capsys.readouterr().out


def test_usage_errors():
    assert run([]) == EXIT_USAGE
    assert run(["solve", "--graph", "C4", "--kind", "dynamo"]) == EXIT_USAGE


def test_construct_figure_grid(capsys):
    assert run(["construct", "--family", "dyn-cycle-complete", "--m", "8", "--n", "10", "--t", "5", "--grid"]) == EXIT_OK
    assert capsys.readouterr().out.count("*") == 24


def test_solve_cycle_complete_dynamo(capsys, db):
    assert run([*db, "solve", "--graph", "C3xK3", "--t", "3", "--kind", "dynamo", "--threads", "2"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["optimum"] == 4
