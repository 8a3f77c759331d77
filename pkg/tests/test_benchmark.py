import json

import pytest

from conftest import FIXTURES, TRANSCRIPTS
from lpagent.benchmark import (
    Instance,
    classify_failure,
    load_dataset,
    run_benchmark,
    score,
)
from lpagent.config import PipelineConfig
from lpagent.errors import MalformedInstance


def replay_config(**kw):
    return PipelineConfig(mode="replay", transcripts_dir=str(TRANSCRIPTS), **kw)


@pytest.fixture(scope="module")
def report():
    return run_benchmark(load_dataset(FIXTURES), replay_config())


def test_load_bundled_dataset():
    instances = load_dataset(FIXTURES)
    assert [i.id for i in instances] == sorted(i.id for i in instances)
    assert len(instances) == 6
    assert all(i.description_path.exists() for i in instances)


def test_load_empty_dir(tmp_path):
    assert load_dataset(tmp_path) == []


def test_missing_truth_file(tmp_path):
    bad = tmp_path / "instances" / "broken"
    bad.mkdir(parents=True)
    (bad / "description.txt").write_text("something")
    with pytest.raises(MalformedInstance):
        load_dataset(tmp_path)


def test_non_numeric_truth(tmp_path):
    bad = tmp_path / "instances" / "broken"
    bad.mkdir(parents=True)
    (bad / "description.txt").write_text("something")
    (bad / "optimal_value.txt").write_text("lots")
    with pytest.raises(MalformedInstance):
        load_dataset(tmp_path)


def test_score():
    assert score("solved", 12.0000, 12) == "correct"
    assert score("solved", 12.1, 12) == "incorrect"
    assert score("budget_exhausted", None, 12) == "failed"
    assert score("solved", 1e-5, 0.0) == "correct"  # absolute floor near zero


def test_classify_label_override(tmp_path):
    labels = tmp_path / "labels.txt"
    labels.write_text("missing_or_wrong_constraints\n")
    instance = Instance(id="x", directory=tmp_path,
                        description_path=tmp_path, data_path=None,
                        optimal_value=1.0, labels_path=labels)
    assert classify_failure(None, instance, "failed") == \
        "missing_or_wrong_constraints"


def test_classify_without_record_unlabeled(tmp_path):
    instance = Instance(id="x", directory=tmp_path,
                        description_path=tmp_path, data_path=None,
                        optimal_value=1.0)
    assert classify_failure(None, instance, "failed") == "unlabeled"


def test_run_benchmark_replay(report):
    assert report.accuracy == pytest.approx(5 / 6)
    assert report.failure_counts == {"coding_errors": 1}
    assert report.prompt_overall["count"] > 0
    assert set(report.mean_calls_per_agent) == \
        {"formulator", "programmer", "evaluator"}


def test_report_reconstructable_from_rows(report):
    correct = sum(1 for r in report.rows if r.verdict == "correct")
    assert report.accuracy == correct / len(report.rows)
    counts = {}
    for row in report.rows:
        if row.category:
            counts[row.category] = counts.get(row.category, 0) + 1
    assert counts == report.failure_counts
    assert sum(counts.values()) == \
        sum(1 for r in report.rows if r.verdict != "correct")


def test_replay_benchmark_deterministic(report):
    a = report
    b = run_benchmark(load_dataset(FIXTURES), replay_config())
    strip = lambda report: json.dumps(
        {**report.to_dict(),
         "rows": [{**r, "wall_seconds": 0} for r in
                  (row.to_dict() for row in report.rows)]}, sort_keys=True)
    assert strip(a) == strip(b)


def test_parallel_matches_serial(report):
    serial = report
    parallel = run_benchmark(load_dataset(FIXTURES), replay_config(),
                             parallelism=3)
    assert [r.verdict for r in serial.rows] == [r.verdict for r in parallel.rows]
    assert serial.accuracy == parallel.accuracy


def test_fault_isolation(tmp_path, monkeypatch):
    """A crash inside one instance never disturbs the others."""
    import lpagent.benchmark as bench

    instances = load_dataset(FIXTURES)
    real = bench.run_pipeline

    def explode(raw, config, llm, backend=None):
        if "desks" in raw.description:  # lp1 only
            raise RuntimeError("injected fault")
        return real(raw, config, llm, backend)

    monkeypatch.setattr(bench, "run_pipeline", explode)
    report = bench.run_benchmark(instances, replay_config())
    rows = {r.instance_id: r for r in report.rows}
    assert rows["lp1_furniture"].verdict == "failed"
    assert "injected fault" in rows["lp1_furniture"].error
    assert rows["lp2_diet"].verdict == "correct"


def test_table_output(report):
    table = report.to_table()
    assert "accuracy: 5/6" in table
    assert "fail1_postings" in table
