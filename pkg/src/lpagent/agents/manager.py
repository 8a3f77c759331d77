"""Manager: picks the next agent and task, via LLM policy or deterministic rules."""

from __future__ import annotations

import logging

from ..errors import BudgetExhausted, MalformedLLMOutput
from ..llm import LlmClient, extract_json_block, load_template
from ..model.entities import (
    C_CODE_FLAGGED,
    C_CODED,
    C_DESCRIBED,
    C_FORMULATED,
    C_FORMULATION_FLAGGED,
    C_VALIDATED,
    V_CODE_FLAGGED,
    V_DEFINED,
)
from .state import AGENT_KINDS, ManagerDecision, PipelineState, Task

log = logging.getLogger(__name__)

CONVERSATION_TAIL = 6


def status_summary(state: PipelineState) -> str:
    problem = state.problem
    clause_counts: dict[str, int] = {}
    for clause in problem.clauses.values():
        clause_counts[clause.status] = clause_counts.get(clause.status, 0) + 1
    var_counts: dict[str, int] = {}
    for var in problem.variables.values():
        var_counts[var.status] = var_counts.get(var.status, 0) + 1
    parts = [
        f"{len(problem.parameters)} parameters",
        f"{len(problem.variables)} variables ("
        + ", ".join(f"{k}: {v}" for k, v in sorted(var_counts.items())) + ")"
        if var_counts else "0 variables",
        f"{len(problem.clauses)} clauses ("
        + ", ".join(f"{k}: {v}" for k, v in sorted(clause_counts.items())) + ")",
        f"evaluation succeeded: {state.evaluation_succeeded}",
        f"calls used: {state.total_calls}/{state.budget}",
    ]
    return "; ".join(parts)


def rule_based_decision(state: PipelineState) -> ManagerDecision:
    problem = state.problem
    described = [c.id for c in problem.clauses.values() if c.status == C_DESCRIBED]
    if described:
        return ManagerDecision(task=Task("formulator", "formulate all clauses"))
    uncoded_vars = [v.symbol for v in problem.variables.values() if v.status == V_DEFINED]
    uncoded_clauses = [c.id for c in problem.clauses.values() if c.status == C_FORMULATED]
    if uncoded_vars or uncoded_clauses:
        return ManagerDecision(task=Task("programmer", "write code for all entities"))
    # code repairs take priority over formulation review
    code_flagged = [v.symbol for v in problem.variables.values()
                    if v.status == V_CODE_FLAGGED]
    code_flagged += [c.id for c in problem.clauses.values() if c.status == C_CODE_FLAGGED]
    if code_flagged:
        return ManagerDecision(task=Task("programmer", "fix the flagged code",
                                         targets=code_flagged))
    formulation_flagged = [c.id for c in problem.clauses.values()
                           if c.status == C_FORMULATION_FLAGGED]
    if formulation_flagged:
        return ManagerDecision(task=Task("formulator", "fix the flagged formulations",
                                         targets=formulation_flagged))
    last_eval = state.last_evaluation()
    if last_eval and last_eval.get("status") in ("infeasible", "unbounded"):
        candidates = last_eval.get("candidates", [])
        return ManagerDecision(
            task=Task(
                "formulator",
                f"review the formulation; the model was {last_eval['status']}",
                targets=list(candidates),
            )
        )
    coded = all(c.status in (C_CODED, C_VALIDATED) for c in problem.clauses.values())
    if coded and not state.evaluation_succeeded:
        return ManagerDecision(task=Task("evaluator", "run the code on the data"))
    return ManagerDecision(done=True)


def _llm_decision(state: PipelineState, llm: LlmClient,
                  prompts_dir: str | None) -> tuple[ManagerDecision, int]:
    template = load_template("manager", prompts_dir)
    tail = state.conversation[-CONVERSATION_TAIL:]
    conversation = "\n".join(f"[{m.sender}] {m.content}" for m in tail) or "(empty)"
    prompt = template.render(status_summary=status_summary(state),
                             conversation=conversation)
    content = llm.chat(prompt, template="manager")
    doc = extract_json_block(content)
    decision = doc.get("decision")
    if decision == "done":
        return ManagerDecision(done=True), len(prompt)
    if decision != "dispatch":
        raise MalformedLLMOutput(f"unknown manager decision {decision!r}")
    agent = doc.get("agent")
    if agent not in AGENT_KINDS:
        raise MalformedLLMOutput(f"unknown agent {agent!r}")
    targets = [str(t) for t in doc.get("targets", [])]
    known = set(state.problem.clauses) | set(state.problem.variables)
    unknown = [t for t in targets if t not in known]
    if unknown:
        raise MalformedLLMOutput(f"manager named unknown targets {unknown}")
    return ManagerDecision(task=Task(agent, str(doc.get("instruction", "")),
                                     targets)), len(prompt)


def manager_step(
    state: PipelineState,
    llm: LlmClient | None = None,
    policy: str = "rule",
    prompts_dir: str | None = None,
) -> ManagerDecision:
    if state.total_calls >= state.budget:
        raise BudgetExhausted(f"budget of {state.budget} agent calls exhausted")
    if policy == "llm":
        if llm is None:
            raise ValueError("llm policy requires a client")
        try:
            decision, prompt_chars = _llm_decision(state, llm, prompts_dir)
            outcome = "done" if decision.done else f"dispatch:{decision.task.agent}"
            state.log_event("manager", "decide", [], [], [prompt_chars], outcome)
            return decision
        except MalformedLLMOutput as exc:
            log.warning("manager LLM output unusable (%s); falling back to rules", exc)
            decision = rule_based_decision(state)
            outcome = "done" if decision.done else f"dispatch:{decision.task.agent}"
            state.log_event("manager", "decide", [], [], [], f"fallback:{outcome}")
            return decision
    decision = rule_based_decision(state)
    outcome = "done" if decision.done else f"dispatch:{decision.task.agent}"
    state.log_event("manager", "decide", [], [], [], outcome)
    return decision
