"""End-to-end checks of the click entry points."""

import json

from click.testing import CliRunner

from lpagent.cli import main

from conftest import FIXTURES, INSTANCES, TRANSCRIPTS

COMMON = ["--transcripts", str(TRANSCRIPTS)]


def invoke(args):
    return CliRunner().invoke(main, args, catch_exceptions=False)


def test_solve_ok(tmp_path):
    result = invoke(["solve", str(INSTANCES / "lp1_furniture"), *COMMON])
    assert result.exit_code == 0
    assert "solved: objective 6.4" in result.output
    events = INSTANCES / "lp1_furniture" / "run.events.jsonl"
    assert events.exists()
    events.unlink()


def test_solve_failure_exits_3():
    result = invoke(["solve", str(INSTANCES / "fail1_postings"), *COMMON])
    assert result.exit_code == 3
    (INSTANCES / "fail1_postings" / "run.events.jsonl").unlink()


def test_solve_replay_miss_exits_4(tmp_path):
    empty = tmp_path / "transcripts"
    empty.mkdir()
    result = invoke(["solve", str(INSTANCES / "lp1_furniture"),
                     "--transcripts", str(empty)])
    assert result.exit_code == 4
    assert "replay miss" in result.output


def test_benchmark_table_and_report(tmp_path):
    report_path = tmp_path / "report.json"
    result = invoke(["benchmark", str(FIXTURES), "--report", str(report_path),
                     *COMMON])
    assert result.exit_code == 0
    assert "accuracy: 5/6" in result.output
    payload = json.loads(report_path.read_text())
    assert len(payload["rows"]) == 6
    assert payload["failure_counts"]["coding_errors"] == 1


def test_benchmark_empty_dataset_exits_2(tmp_path):
    (tmp_path / "instances").mkdir()
    result = invoke(["benchmark", str(tmp_path), *COMMON])
    assert result.exit_code == 2


def test_benchmark_replay_miss_exits_4(tmp_path):
    empty = tmp_path / "transcripts"
    empty.mkdir()
    result = invoke(["benchmark", str(FIXTURES), "--transcripts", str(empty)])
    assert result.exit_code == 4


def test_inspect_writes_artifacts(tmp_path):
    result = invoke(["inspect", str(INSTANCES / "lp1_furniture"),
                     "--out", str(tmp_path), *COMMON])
    assert result.exit_code == 0
    problem = json.loads((tmp_path / "problem.json").read_text())
    assert problem["parameters"]
    assert any(c["kind"] == "objective" for c in problem["clauses"])
    assert (tmp_path / "graph.dot").read_text().startswith("digraph")


def test_oracle_on_lp_file():
    result = invoke(["oracle", str(FIXTURES / "lp" / "knapsack.lp")])
    assert result.exit_code == 0
    assert "status: optimal" in result.output
    assert "objective: 21" in result.output


def test_oracle_scope_exceeded(tmp_path):
    lp = tmp_path / "big.lp"
    lp.write_text("Maximize\n obj: w + x + y + z\nSubject To\n"
                  " c0: w + x + y + z <= 4\nEnd\n")
    result = invoke(["oracle", str(lp)])
    assert result.exit_code == 3
    assert "out of oracle scope" in result.output


def test_bad_instance_dir_exits_2(tmp_path):
    result = invoke(["solve", str(tmp_path), *COMMON])
    assert result.exit_code == 2
