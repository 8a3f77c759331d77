"""Evaluator: runs the assembled job and attributes failures to entities."""

from __future__ import annotations

import logging
from typing import Callable

from ..errors import BackendUnavailable
from ..execution import ExecutionJob, ExecutionResult
from ..model.entities import (
    C_CODE_FLAGGED,
    C_CODED,
    C_VALIDATED,
    V_CODE_FLAGGED,
    V_CODED,
)
from .state import Message, PipelineState, Task

log = logging.getLogger(__name__)

Backend = Callable[[ExecutionJob], ExecutionResult]


def build_job(state: PipelineState, code_target: str = "amdl",
              limits=None) -> ExecutionJob:
    problem = state.problem
    if problem.data is None:
        raise BackendUnavailable("no data bundle attached to the problem")
    not_ready = [v.symbol for v in problem.variables.values() if not v.code]
    not_ready += [c.id for c in problem.clauses.values() if not c.code]
    if not_ready:
        raise BackendUnavailable(f"entities without code: {not_ready}")
    job = ExecutionJob(
        data=problem.data,
        variable_snippets={v.symbol: v.code for v in problem.variables.values()},
        clause_snippets={cid: problem.clauses[cid].code for cid in problem.clause_ids()},
        code_target=code_target,
    )
    if limits is not None:
        job.limits = limits
    return job


def evaluate(
    state: PipelineState,
    backend: Backend,
    task: Task | None = None,
    code_target: str = "amdl",
    limits=None,
) -> Message:
    problem = state.problem
    job = build_job(state, code_target, limits)
    result = backend(job)
    changes: list[tuple[str, str, str]] = []
    instruction = task.instruction if task else "evaluate"
    if result.status == "optimal":
        for cid in problem.clause_ids():
            clause = problem.clauses[cid]
            if clause.status == C_CODED:
                clause.set_status(C_VALIDATED)
                changes.append((cid, C_CODED, C_VALIDATED))
        state.objective = result.objective
        state.values = result.values
        state.evaluation_succeeded = True
        message = Message(
            sender="evaluator",
            content=f"execution succeeded; objective {result.objective}",
            structured_result={"status": "optimal", "objective": result.objective},
        )
        outcome = "optimal"
    elif result.status == "error":
        entity_id = (result.error or {}).get("entity_id", "")
        detail = (result.error or {}).get("detail", "")
        if entity_id in problem.variables:
            var = problem.variables[entity_id]
            before = var.status
            if before == V_CODED:
                var.set_status(V_CODE_FLAGGED)
                changes.append((entity_id, before, V_CODE_FLAGGED))
        elif entity_id in problem.clauses:
            clause = problem.clauses[entity_id]
            before = clause.status
            if before in (C_CODED, C_VALIDATED):
                clause.set_status(C_CODE_FLAGGED)
                changes.append((entity_id, before, C_CODE_FLAGGED))
        if entity_id:
            state.last_errors[entity_id] = detail
        message = Message(
            sender="evaluator",
            content=f"execution failed at {entity_id or 'unknown entity'}: {detail}",
            structured_result={"status": "error", "entity_id": entity_id,
                               "detail": detail},
        )
        outcome = f"error:{entity_id}"
    elif result.status in ("infeasible", "unbounded"):
        # no code is flagged; name review candidates for the formulator
        candidates = [cid for cid in problem.clause_ids()
                      if problem.clauses[cid].kind == "constraint"]
        message = Message(
            sender="evaluator",
            content=(f"model was {result.status}; review the formulation of "
                     f"candidate clauses {', '.join(candidates)}"),
            structured_result={"status": result.status, "candidates": candidates},
        )
        outcome = result.status
    else:  # timeout
        message = Message(
            sender="evaluator",
            content="execution timed out",
            structured_result={"status": "timeout"},
        )
        outcome = "timeout"
    state.post(message)
    state.log_event("evaluator", instruction, [], changes, [], outcome)
    return message
