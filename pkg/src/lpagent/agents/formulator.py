"""Formulator: writes and repairs mathematical formulations, maintaining the graph."""

from __future__ import annotations

import logging

from ..errors import MalformedLLMOutput, UnknownSymbolDeclared
from ..llm import CORRECTIVE_NOTE, LlmClient, extract_json_block, load_template
from ..model import Clause, Variable, extract_context
from ..model.entities import (
    C_CODED,
    C_DESCRIBED,
    C_FORMULATED,
    C_FORMULATION_FLAGGED,
    C_VALIDATED,
)
from .state import Message, PipelineState, Task

log = logging.getLogger(__name__)

LOCAL_RETRIES = 1

# One cheatsheet per special structure offered during the post-formulation sweep.
CHEATSHEETS = [
    {
        "name": "Special Ordered Set",
        "description": (
            "An SOS1 group allows at most one member variable to be nonzero; an "
            "SOS2 group allows at most two, and they must be consecutive. Useful "
            "for selection among alternatives and piecewise-linear functions."
        ),
        "example": (
            "Piecewise-linear cost over breakpoints: weights w[0..3] >= 0 with "
            "sum(w) = 1 form an SOS2 group, so the cost interpolates between two "
            "adjacent breakpoints only."
        ),
    },
    {
        "name": "Indicator variable",
        "description": (
            "A binary variable can switch a linear constraint on or off: when the "
            "binary takes its active value, the constraint must hold. Prefer this "
            "over big-M reformulations when the solver supports it."
        ),
        "example": (
            "Warehouse sizing: if open[w] = 1 then shipped[w] <= Capacity[w]; "
            "when open[w] = 0 the constraint is off and shipped[w] is forced to 0 "
            "by a companion constraint."
        ),
    },
    {
        "name": "General constraints",
        "description": (
            "Min, max, and absolute-value relations over linear expressions can "
            "be stated directly as general constraints instead of hand-built "
            "auxiliary variables and inequalities."
        ),
        "example": (
            "Peak load: peak = max(load[t] for all t) lets the solver handle the "
            "epigraph reformulation internally."
        ),
    },
]


def _next_clause_id(state: PipelineState) -> str:
    n = 1
    while f"c{n}" in state.problem.clauses:
        n += 1
    return f"c{n}"


def _call_with_retry(llm: LlmClient, prompt: str, template: str) -> dict:
    last: MalformedLLMOutput | None = None
    for _ in range(LOCAL_RETRIES + 1):
        content = llm.chat(prompt, template=template)
        try:
            return extract_json_block(content)
        except MalformedLLMOutput as exc:
            last = exc
            prompt = prompt + CORRECTIVE_NOTE
    assert last is not None
    raise last


def _apply_formulation(state: PipelineState, clause: Clause, doc: dict) -> list[tuple[str, str, str]]:
    problem = state.problem
    formulation = str(doc.get("formulation", "")).strip()
    if not formulation:
        raise MalformedLLMOutput("empty formulation")
    related = [str(s) for s in doc.get("related", [])]
    new_variables = doc.get("new_variables", [])
    changes: list[tuple[str, str, str]] = []
    for item in new_variables:
        symbol = str(item.get("symbol", ""))
        if symbol in problem.variables or symbol in problem.parameters:
            continue  # already declared by an earlier clause
        var = Variable(
            symbol,
            [d if isinstance(d, int) else str(d) for d in item.get("shape", [])],
            str(item.get("domain", "continuous")),
            str(item.get("definition", "")),
        )
        problem.add_entity(var)
        changes.append((symbol, "", "defined"))
    known = set(problem.parameters) | set(problem.variables)
    unknown = [s for s in related if s not in known]
    if unknown:
        raise UnknownSymbolDeclared(
            f"{clause.id}: formulation references unknown symbols {unknown}"
        )
    before = clause.status
    if before in (C_CODED, C_VALIDATED):
        clause.set_status(C_FORMULATION_FLAGGED)
        changes.append((clause.id, before, C_FORMULATION_FLAGGED))
        before = C_FORMULATION_FLAGGED
    clause.formulation = formulation
    if before != C_FORMULATED:
        clause.set_status(C_FORMULATED)
        changes.append((clause.id, before, C_FORMULATED))
    problem.replace_edges(clause.id, related)
    for item in doc.get("auxiliary_constraints", []):
        aux_id = _next_clause_id(state)
        aux = Clause(id=aux_id, kind="constraint",
                     description=str(item.get("description", "")))
        problem.add_entity(aux)
        aux.formulation = str(item.get("formulation", ""))
        aux.set_status(C_FORMULATED)
        problem.replace_edges(aux_id, [str(s) for s in item.get("related", [])])
        changes.append((aux_id, "", C_FORMULATED))
    return changes


def formulate(
    state: PipelineState,
    task: Task,
    llm: LlmClient,
    prompts_dir: str | None = None,
) -> Message:
    problem = state.problem
    if task.targets:
        targets = [t for t in task.targets if t in problem.clauses]
    else:
        targets = [cid for cid in problem.clause_ids()
                   if problem.clauses[cid].status == C_DESCRIBED]
        if not targets:
            targets = [cid for cid in problem.clause_ids()
                       if problem.clauses[cid].status == C_FORMULATION_FLAGGED]
    done: list[str] = []
    failed: list[str] = []
    changes: list[tuple[str, str, str]] = []
    prompt_chars: list[int] = []
    for cid in targets:
        clause = problem.clauses[cid]
        fixing = clause.status != C_DESCRIBED
        template_name = "formulation_fix" if fixing else "formulation"
        template = load_template(template_name, prompts_dir)
        context = extract_context(problem, cid, "definitions").render()
        if fixing:
            issue = state.last_errors.get(cid, task.instruction or "reported as incorrect")
            prompt = template.render(context=context, issue=issue)
        else:
            prompt = template.render(context=context)
        prompt_chars.append(len(prompt))
        try:
            doc = _call_with_retry(llm, prompt, template_name)
            changes.extend(_apply_formulation(state, clause, doc))
            done.append(cid)
        except (MalformedLLMOutput, UnknownSymbolDeclared) as exc:
            log.warning("formulator failed on %s: %s", cid, exc)
            failed.append(cid)
    summary = f"formulated {len(done)} clause(s)"
    if failed:
        summary += f"; failed on {', '.join(failed)}"
    message = Message(sender="formulator", content=summary,
                      structured_result={"formulated": done, "failed": failed})
    state.post(message)
    state.log_event("formulator", task.instruction, targets, changes, prompt_chars,
                    "ok" if not failed else "partial")
    return message


def technique_pass(
    state: PipelineState,
    llm: LlmClient,
    prompts_dir: str | None = None,
) -> Message:
    problem = state.problem
    template = load_template("technique", prompts_dir)
    clause_lines = []
    for cid in problem.clause_ids():
        clause = problem.clauses[cid]
        clause_lines.append(f"- {cid} ({clause.kind}): {clause.description}\n"
                            f"  formulation: {clause.formulation}")
    applied: list[str] = []
    prompt_chars: list[int] = []
    changes: list[tuple[str, str, str]] = []
    for sheet in CHEATSHEETS:
        prompt = template.render(
            structure_name=sheet["name"],
            structure_description=sheet["description"],
            example=sheet["example"],
            background=problem.background,
            clauses="\n".join(clause_lines),
        )
        prompt_chars.append(len(prompt))
        try:
            doc = _call_with_retry(llm, prompt, "technique")
        except MalformedLLMOutput as exc:
            log.warning("technique pass skipped for %s: %s", sheet["name"], exc)
            continue
        if not doc.get("applicable"):
            continue
        for app in doc.get("applications", []):
            cid = str(app.get("clause_id", ""))
            if cid not in problem.clauses:
                log.warning("technique names unknown clause %s; skipped", cid)
                continue
            clause = problem.clauses[cid]
            rewritten = str(app.get("rewritten_formulation", "")).strip()
            if rewritten:
                clause.formulation = rewritten
            annotation = app.get("annotation")
            if isinstance(annotation, dict):
                clause.annotation = annotation
            applied.append(f"{sheet['name']} -> {cid}")
    summary = ("applied structures: " + "; ".join(applied)) if applied else \
        "no special structures applicable"
    message = Message(sender="formulator", content=summary,
                      structured_result={"applied": applied})
    state.post(message)
    state.log_event("formulator", "technique pass", [], changes, prompt_chars,
                    f"applied:{len(applied)}")
    state.technique_done = True
    return message
