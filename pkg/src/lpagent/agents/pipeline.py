"""Alg-style pipeline loop: preprocess, then manager-coordinated agent rounds."""

from __future__ import annotations

import functools
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

from ..config import PipelineConfig
from ..errors import BudgetExhausted, LpAgentError, ReplayMiss
from ..execution import execute_lp, execute_script
from ..llm import LlmClient
from ..model import StructuredProblem
from ..preprocess import PreprocessReport, RawProblem, preprocess
from .evaluator import evaluate
from .formulator import formulate, technique_pass
from .manager import manager_step
from .programmer import program
from .state import Message, PipelineState, Task

log = logging.getLogger(__name__)


@dataclass
class Outcome:
    kind: str  # solved | budget_exhausted | failed
    objective: float | None = None
    values: dict[str, float] | None = None
    reason: str = ""


@dataclass
class RunRecord:
    events: list[dict] = field(default_factory=list)
    conversation: list[Message] = field(default_factory=list)
    calls_used: dict[str, int] = field(default_factory=dict)
    problem: StructuredProblem | None = None
    report: PreprocessReport | None = None
    outcome: Outcome | None = None

    def write_events(self, path: str | Path) -> None:
        with open(path, "w") as fh:
            for event in self.events:
                fh.write(json.dumps(event, ensure_ascii=False) + "\n")


def _make_backend(config: PipelineConfig):
    if config.code_target == "script":
        return functools.partial(execute_script, runner_cmd=config.runner_cmd)
    return functools.partial(
        execute_lp,
        solver_cmd=config.resolved_solver_cmd(),
        solution_dialect=config.solution_dialect,
        keep_artifacts=config.keep_artifacts,
        artifacts_dir=config.artifacts_dir,
    )


def run_pipeline(
    raw: RawProblem,
    config: PipelineConfig,
    llm: LlmClient,
    backend=None,
) -> tuple[Outcome, RunRecord]:
    record = RunRecord()
    try:
        problem, report = preprocess(raw, llm, config.prompts_dir)
    except ReplayMiss:
        raise
    except LpAgentError as exc:
        outcome = Outcome(kind="failed", reason=f"preprocess: {exc}")
        record.outcome = outcome
        return outcome, record
    record.report = report
    state = PipelineState(problem=problem, budget=config.budget)
    record.problem = problem
    record.events = state.event_log
    record.conversation = state.conversation
    record.calls_used = state.calls_used
    backend = backend or _make_backend(config)
    outcome: Outcome
    while True:
        try:
            decision = manager_step(state, llm, config.policy, config.prompts_dir)
        except BudgetExhausted:
            if state.evaluation_succeeded:
                outcome = Outcome(kind="solved", objective=state.objective,
                                  values=state.values)
            else:
                outcome = Outcome(kind="budget_exhausted",
                                  reason=f"budget of {config.budget} calls exhausted")
            break
        if decision.done:
            if state.evaluation_succeeded:
                outcome = Outcome(kind="solved", objective=state.objective,
                                  values=state.values)
            else:
                outcome = Outcome(kind="failed", reason="manager declared done "
                                  "without a successful evaluation")
            break
        task = decision.task
        assert task is not None
        state.count_call(task.agent)
        try:
            if task.agent == "formulator":
                formulate(state, task, llm, config.prompts_dir)
                all_formulated = all(
                    c.status != "described" and c.formulation
                    for c in problem.clauses.values()
                )
                if config.techniques and not state.technique_done and all_formulated:
                    technique_pass(state, llm, config.prompts_dir)
            elif task.agent == "programmer":
                program(state, task, llm, config.code_target, config.debug,
                        config.prompts_dir)
            else:
                evaluate(state, backend, task, config.code_target, config.limits)
        except LpAgentError as exc:
            if isinstance(exc, ReplayMiss):
                raise
            log.warning("agent %s failed: %s", task.agent, exc)
            state.post(Message(sender=task.agent, content=f"agent failure: {exc}",
                               structured_result={"status": "agent_error"}))
            state.log_event(task.agent, task.instruction, [], [], [],
                            f"agent_error:{type(exc).__name__}")
    record.outcome = outcome
    return outcome, record


def replay_status_changes(events: list[dict]) -> dict[str, str]:
    """Fold the event log's status changes into final entity statuses."""
    statuses: dict[str, str] = {}
    for event in events:
        for entity_id, _before, after in event.get("status_changes", []):
            statuses[entity_id] = after
    return statuses
