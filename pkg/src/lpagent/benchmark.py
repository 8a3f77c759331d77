"""Batch evaluation: dataset loading, scoring, failure taxonomy, reports."""

from __future__ import annotations

import dataclasses
import json
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .agents import RunRecord, run_pipeline
from .config import PipelineConfig, build_client
from .errors import EmptyRecord, MalformedInstance, ReplayMiss
from .llm import prompt_stats
from .preprocess import load_raw_problem

log = logging.getLogger(__name__)

TOL_REL = 1e-4
TOL_ABS = 1e-4

FAILURE_CATEGORIES = (
    "coding_errors",
    "incorrect_modeling",
    "missing_or_wrong_constraints",
    "unlabeled",
)


@dataclass
class Instance:
    id: str
    directory: Path
    description_path: Path
    data_path: Path | None
    optimal_value: float
    labels_path: Path | None = None


def load_dataset(root: str | Path) -> list[Instance]:
    """Load `instances/<id>/{description.txt,data.json,optimal_value.txt}`."""
    root = Path(root)
    base = root / "instances"
    if not base.is_dir():
        return []
    instances = []
    for entry in sorted(p for p in base.iterdir() if p.is_dir()):
        instance_id = entry.name
        description = entry / "description.txt"
        if not description.is_file():
            raise MalformedInstance(instance_id, "missing description.txt")
        truth_path = entry / "optimal_value.txt"
        if not truth_path.is_file():
            raise MalformedInstance(instance_id, "missing optimal_value.txt")
        try:
            truth = float(truth_path.read_text().strip())
        except ValueError:
            raise MalformedInstance(instance_id, "optimal_value.txt is not a number")
        if not math.isfinite(truth):
            raise MalformedInstance(instance_id, "optimal value must be finite")
        data_path = entry / "data.json"
        labels_path = entry / "labels.txt"
        instances.append(Instance(
            id=instance_id,
            directory=entry,
            description_path=description,
            data_path=data_path if data_path.is_file() else None,
            optimal_value=truth,
            labels_path=labels_path if labels_path.is_file() else None,
        ))
    return instances


def score(outcome_kind: str, objective: float | None, truth: float,
          tol_rel: float = TOL_REL, tol_abs: float = TOL_ABS) -> str:
    if outcome_kind != "solved" or objective is None:
        return "failed"
    if abs(objective - truth) <= max(tol_abs, tol_rel * abs(truth)):
        return "correct"
    return "incorrect"


def classify_failure(record: RunRecord | None, instance: Instance,
                     verdict: str) -> str:
    """Assign a failure category to a non-correct run."""
    if instance.labels_path is not None:
        label = instance.labels_path.read_text().strip()
        if label in FAILURE_CATEGORIES:
            return label
        log.warning("instance %s: unknown label %r ignored", instance.id, label)
    if record is None:
        return "unlabeled"
    last_eval = None
    for message in reversed(record.conversation):
        if message.sender == "evaluator" and message.structured_result:
            last_eval = message.structured_result
            break
    if last_eval and last_eval.get("status") in ("error", "timeout"):
        return "coding_errors"
    if verdict == "incorrect":
        return "incorrect_modeling"
    if last_eval and last_eval.get("status") in ("infeasible", "unbounded"):
        return "incorrect_modeling"
    return "unlabeled"


@dataclass
class Row:
    instance_id: str
    outcome: str
    verdict: str
    objective: float | None
    truth: float
    rel_error: float | None
    category: str | None
    calls: dict[str, int]
    prompt_mean: float | None
    wall_seconds: float
    error: str | None = None

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass
class Report:
    rows: list[Row]
    accuracy: float
    failure_counts: dict[str, int]
    mean_calls_per_agent: dict[str, float]
    prompt_overall: dict | None
    prompt_per_agent: dict[str, dict] = field(default_factory=dict)
    replay_misses: int = 0

    def to_dict(self) -> dict:
        return {
            "rows": [row.to_dict() for row in self.rows],
            "accuracy": self.accuracy,
            "failure_counts": self.failure_counts,
            "mean_calls_per_agent": self.mean_calls_per_agent,
            "prompt_overall": self.prompt_overall,
            "prompt_per_agent": self.prompt_per_agent,
            "replay_misses": self.replay_misses,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_table(self) -> str:
        header = f"{'instance':<16} {'verdict':<10} {'objective':>14} " \
                 f"{'truth':>14} {'category':<24} {'secs':>6}"
        lines = [header, "-" * len(header)]
        for row in self.rows:
            obj = f"{row.objective:.6g}" if row.objective is not None else "-"
            lines.append(
                f"{row.instance_id:<16} {row.verdict:<10} {obj:>14} "
                f"{row.truth:>14.6g} {row.category or '-':<24} "
                f"{row.wall_seconds:>6.2f}"
            )
        correct = sum(1 for r in self.rows if r.verdict == "correct")
        lines.append("-" * len(header))
        lines.append(f"accuracy: {correct}/{len(self.rows)} = {self.accuracy:.3f}")
        if self.mean_calls_per_agent:
            calls = ", ".join(f"{k}: {v:.2f}"
                              for k, v in sorted(self.mean_calls_per_agent.items()))
            lines.append(f"mean calls per instance: {calls}")
        return "\n".join(lines) + "\n"


def _run_instance(instance: Instance, config: PipelineConfig,
                  llm) -> tuple[Row, list[dict]]:
    start = time.perf_counter()
    record: RunRecord | None = None
    outcome_kind = "failed"
    objective = None
    error = None
    try:
        raw = load_raw_problem(instance.directory)
        outcome, record = run_pipeline(raw, config, llm)
        outcome_kind = outcome.kind
        objective = outcome.objective
        if outcome.reason:
            error = outcome.reason
    except ReplayMiss as exc:
        error = f"replay_miss: {exc.key}"
    except Exception as exc:
        log.exception("instance %s crashed", instance.id)
        error = f"{type(exc).__name__}: {exc}"
    wall = time.perf_counter() - start
    verdict = score(outcome_kind, objective, instance.optimal_value)
    rel_error = None
    if objective is not None and instance.optimal_value != 0:
        rel_error = abs(objective - instance.optimal_value) / abs(instance.optimal_value)
    elif objective is not None:
        rel_error = abs(objective)
    category = None
    if verdict != "correct":
        category = classify_failure(record, instance, verdict)
    prompt_mean = None
    if record is not None:
        try:
            prompt_mean = prompt_stats(record.events).overall.mean
        except EmptyRecord:
            pass
    row = Row(
        instance_id=instance.id,
        outcome=outcome_kind,
        verdict=verdict,
        objective=objective,
        truth=instance.optimal_value,
        rel_error=rel_error,
        category=category,
        calls=dict(record.calls_used) if record else {},
        prompt_mean=prompt_mean,
        wall_seconds=wall,
        error=error,
    )
    return row, list(record.events) if record else []


def run_benchmark(dataset: list[Instance], config: PipelineConfig,
                  parallelism: int = 1, llm=None) -> Report:
    llm = llm or build_client(config)
    if parallelism > 1:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            results = list(pool.map(lambda i: _run_instance(i, config, llm), dataset))
    else:
        results = [_run_instance(i, config, llm) for i in dataset]
    rows = [row for row, _events in results]
    correct = sum(1 for r in rows if r.verdict == "correct")
    accuracy = correct / len(rows) if rows else 0.0
    failure_counts: dict[str, int] = {}
    for row in rows:
        if row.category:
            failure_counts[row.category] = failure_counts.get(row.category, 0) + 1
    mean_calls: dict[str, float] = {}
    if rows:
        agents = {agent for row in rows for agent in row.calls}
        for agent in sorted(agents):
            mean_calls[agent] = sum(r.calls.get(agent, 0) for r in rows) / len(rows)
    all_events = [event for _row, events in results for event in events]
    overall = None
    per_agent: dict[str, dict] = {}
    try:
        pooled = prompt_stats(all_events)
        overall = dataclasses.asdict(pooled.overall)
        per_agent = {k: dataclasses.asdict(v) for k, v in pooled.per_agent.items()}
    except EmptyRecord:
        pass
    replay_misses = sum(1 for r in rows
                        if r.error and r.error.startswith("replay_miss"))
    return Report(
        rows=rows,
        accuracy=accuracy,
        failure_counts=failure_counts,
        mean_calls_per_agent=mean_calls,
        prompt_overall=overall,
        prompt_per_agent=per_agent,
        replay_misses=replay_misses,
    )
