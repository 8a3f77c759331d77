"""Programmer: writes and repairs per-entity solver code snippets."""

from __future__ import annotations

import logging

from ..errors import AmdlSyntaxError, MalformedLLMOutput, NonlinearTerm, TargetMismatch
from ..llm import LlmClient, extract_json_block, load_template
from ..amdl import parse_amdl
from ..amdl.ast import ConstraintStmt, ObjectiveStmt, SosStmt, VarDecl
from ..model import extract_context
from ..model.entities import (
    C_CODE_FLAGGED,
    C_CODED,
    C_FORMULATED,
    V_CODE_FLAGGED,
    V_CODED,
    V_DEFINED,
)
from .state import Message, PipelineState, Task

log = logging.getLogger(__name__)

LOCAL_RETRIES = 1


def _surface_check(entity_id: str, code: str, state: PipelineState,
                   code_target: str) -> None:
    """Reject snippets that fail the target's surface check (parse, kind)."""
    if code_target != "amdl":
        if not code.strip():
            raise TargetMismatch(f"{entity_id}: empty snippet")
        return
    var_symbols = set(state.problem.variables)
    stmt = parse_amdl(code, var_symbols=var_symbols)
    if entity_id in state.problem.variables and not isinstance(stmt, VarDecl):
        raise TargetMismatch(f"{entity_id}: expected a var declaration")
    if entity_id in state.problem.clauses:
        clause = state.problem.clauses[entity_id]
        if clause.kind == "objective" and not isinstance(stmt, ObjectiveStmt):
            raise TargetMismatch(f"{entity_id}: expected an objective statement")
        if clause.kind == "constraint" and not isinstance(stmt, (ConstraintStmt, SosStmt)):
            raise TargetMismatch(f"{entity_id}: expected a constraint statement")


def _code_entity(
    state: PipelineState,
    entity_id: str,
    fixing: bool,
    llm: LlmClient,
    code_target: str,
    prompts_dir: str | None,
    prompt_chars: list[int],
) -> list[tuple[str, str, str]]:
    problem = state.problem
    is_variable = entity_id in problem.variables
    if fixing:
        template_name = "debugging"
        template = load_template(template_name, prompts_dir)
        if is_variable:
            var = problem.variables[entity_id]
            context = (f"Background: {problem.background}\n"
                       f"Variable {var.symbol}: shape {var.shape}, domain {var.domain}"
                       f" -- {var.definition}")
            old_code = var.code or ""
        else:
            context = extract_context(problem, entity_id, "code").render()
            old_code = problem.clauses[entity_id].code or ""
        prompt = template.render(
            target=code_target,
            context=context,
            code=old_code,
            error=state.last_errors.get(entity_id, "unknown error"),
        )
    elif is_variable:
        template_name = "variable_coding"
        template = load_template(template_name, prompts_dir)
        var = problem.variables[entity_id]
        shape = "[" + ", ".join(str(d) for d in var.shape) + "]" if var.shape else "scalar"
        prompt = template.render(
            target=code_target,
            background=problem.background,
            symbol=var.symbol,
            shape=shape,
            domain=var.domain,
            definition=var.definition,
        )
    else:
        template_name = "clause_coding"
        template = load_template(template_name, prompts_dir)
        context = extract_context(problem, entity_id, "code").render()
        prompt = template.render(target=code_target, context=context)
    last_error: Exception | None = None
    for _ in range(LOCAL_RETRIES + 1):
        prompt_chars.append(len(prompt))
        content = llm.chat(prompt, template=template_name)
        try:
            doc = extract_json_block(content)
            code = str(doc.get("code", "")).strip()
            if not code:
                raise MalformedLLMOutput(f"{entity_id}: empty code")
            _surface_check(entity_id, code, state, code_target)
        except (MalformedLLMOutput, TargetMismatch, AmdlSyntaxError, NonlinearTerm) as exc:
            last_error = exc
            prompt = prompt + f"\n\nThe previous snippet was rejected: {exc}. " \
                "Reply again with exactly one fenced json block."
            continue
        changes: list[tuple[str, str, str]] = []
        if is_variable:
            var = problem.variables[entity_id]
            before = var.status
            var.code = code
            var.set_status(V_CODED)
            changes.append((entity_id, before, V_CODED))
        else:
            clause = problem.clauses[entity_id]
            before = clause.status
            clause.code = code
            clause.set_status(C_CODED)
            changes.append((entity_id, before, C_CODED))
        state.last_errors.pop(entity_id, None)
        return changes
    state.last_errors[entity_id] = str(last_error)
    raise TargetMismatch(f"{entity_id}: snippet rejected after retry: {last_error}")


def program(
    state: PipelineState,
    task: Task,
    llm: LlmClient,
    code_target: str = "amdl",
    debug: bool = True,
    prompts_dir: str | None = None,
) -> Message:
    problem = state.problem
    if task.targets:
        var_targets = [t for t in task.targets if t in problem.variables]
        clause_targets = [t for t in task.targets if t in problem.clauses]
    else:
        var_targets = [v.symbol for v in problem.variables.values()
                       if v.status in (V_DEFINED, V_CODE_FLAGGED)]
        clause_targets = [cid for cid in problem.clause_ids()
                          if problem.clauses[cid].status in (C_FORMULATED, C_CODE_FLAGGED)]
    fixing_any = any(
        problem.variables[t].status == V_CODE_FLAGGED for t in var_targets
    ) or any(problem.clauses[t].status == C_CODE_FLAGGED for t in clause_targets)
    if fixing_any and not debug:
        message = Message(
            sender="programmer",
            content="debugging is disabled; flagged code left untouched",
            structured_result={"refused": True},
        )
        state.post(message)
        state.log_event("programmer", task.instruction, var_targets + clause_targets,
                        [], [], "debug_disabled")
        return message
    done: list[str] = []
    failed: list[str] = []
    changes: list[tuple[str, str, str]] = []
    prompt_chars: list[int] = []
    # variables first: clauses reference them
    for entity_id in var_targets + clause_targets:
        if entity_id in problem.variables:
            fixing = problem.variables[entity_id].status == V_CODE_FLAGGED
        else:
            fixing = problem.clauses[entity_id].status == C_CODE_FLAGGED
        try:
            changes.extend(
                _code_entity(state, entity_id, fixing, llm, code_target,
                             prompts_dir, prompt_chars)
            )
            done.append(entity_id)
        except (MalformedLLMOutput, TargetMismatch) as exc:
            log.warning("programmer failed on %s: %s", entity_id, exc)
            failed.append(entity_id)
    summary = f"coded {len(done)} entity(ies)"
    if failed:
        summary += f"; failed on {', '.join(failed)}"
    message = Message(sender="programmer", content=summary,
                      structured_result={"coded": done, "failed": failed})
    state.post(message)
    state.log_event("programmer", task.instruction, var_targets + clause_targets,
                    changes, prompt_chars, "ok" if not failed else "partial")
    return message
