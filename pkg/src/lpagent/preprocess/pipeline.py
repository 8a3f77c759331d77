"""Three-stage preprocessing: parameter extraction, segmentation, filtering.

Each stage demands exactly one fenced JSON block from the LLM and retries
with a corrective instruction on malformed output. A stage failure discards
the whole run; no partial problem is ever emitted.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

from ..errors import (
    DataShapeMismatch,
    MalformedLLMOutput,
    MissingObjective,
)
from ..llm import (
    CORRECTIVE_NOTE,
    STAGE_RETRIES,
    LlmClient,
    extract_json_block,
    load_template,
)
from ..model import Clause, DataBundle, Parameter, StructuredProblem
from ..model.entities import check_symbol

BACKGROUND_CAP = 400
REMOVAL_REASONS = ("redundant", "unnecessary", "incorrect")


@dataclass
class RawProblem:
    description: str
    data: DataBundle | None = None

    def __post_init__(self):
        if not self.description.strip():
            raise ValueError("problem description must be non-empty")


@dataclass
class PreprocessReport:
    parameter_count: int = 0
    clauses_before_filter: int = 0
    clauses_after_filter: int = 0
    removed: list[dict[str, str]] = field(default_factory=list)
    retries: dict[str, int] = field(default_factory=dict)


def load_raw_problem(instance_dir: str | Path) -> RawProblem:
    """Read the `description.txt` (+ optional `data.json`) instance layout."""
    instance_dir = Path(instance_dir)
    description = (instance_dir / "description.txt").read_text()
    data = None
    data_path = instance_dir / "data.json"
    if data_path.exists():
        doc = json.loads(data_path.read_text())
        data = DataBundle(doc.get("dimensions", {}), doc.get("values", {}))
    return RawProblem(description=description, data=data)


def _staged_call(
    llm: LlmClient,
    template_name: str,
    bindings: dict[str, str],
    validate: Callable[[dict[str, Any]], Any],
    prompts_dir: str | Path | None = None,
) -> tuple[Any, int]:
    template = load_template(template_name, prompts_dir)
    prompt = template.render(**bindings)
    last_error: Exception = MalformedLLMOutput("no attempts made")
    for attempt in range(STAGE_RETRIES + 1):
        content = llm.chat(prompt, template=template_name)
        try:
            return validate(extract_json_block(content)), attempt
        except (MalformedLLMOutput, MissingObjective) as exc:
            last_error = exc
            prompt = prompt + CORRECTIVE_NOTE
    raise last_error


def _render_parameters(parameters: list[Parameter]) -> str:
    if not parameters:
        return "(none)"
    lines = []
    for p in parameters:
        shape = "[" + ", ".join(str(d) for d in p.shape) + "]" if p.shape else "scalar"
        lines.append(f"- {p.symbol}: shape {shape} -- {p.definition}")
    return "\n".join(lines)


def extract_parameters(
    raw: RawProblem, llm: LlmClient, prompts_dir: str | Path | None = None
) -> tuple[list[Parameter], DataBundle, dict[str, int]]:
    data_note = (
        "A separate data file is supplied; its contents take precedence over "
        "any numbers in the description."
        if raw.data is not None
        else "No separate data file exists; collect numeric values from the description."
    )

    def validate(doc: dict[str, Any]) -> tuple[list[Parameter], DataBundle]:
        if "parameters" not in doc or not isinstance(doc["parameters"], list):
            raise MalformedLLMOutput("missing 'parameters' list")
        parameters = []
        seen: set[str] = set()
        for item in doc["parameters"]:
            try:
                symbol = check_symbol(item["symbol"])
                shape = [d if isinstance(d, int) else str(d) for d in item.get("shape", [])]
                parameters.append(Parameter(symbol, shape, str(item.get("definition", ""))))
            except Exception as exc:
                raise MalformedLLMOutput(f"bad parameter entry {item!r}: {exc}") from exc
            if symbol in seen:
                raise MalformedLLMOutput(f"duplicate parameter symbol {symbol}")
            seen.add(symbol)
        if raw.data is not None:
            bundle = raw.data  # external file always wins over inline numbers
        else:
            data_doc = doc.get("data", {})
            if not isinstance(data_doc, dict):
                raise MalformedLLMOutput("'data' must be an object")
            try:
                bundle = DataBundle(
                    dict(data_doc.get("dimensions", {})), dict(data_doc.get("values", {}))
                )
            except DataShapeMismatch as exc:
                raise MalformedLLMOutput(str(exc)) from exc
        for param in parameters:
            bundle.check_value(param.symbol, param.shape)  # raises DataShapeMismatch
        return parameters, bundle

    (parameters, bundle), retries = _staged_call(
        llm,
        "preprocess_params",
        {"description": raw.description, "data_note": data_note},
        validate,
        prompts_dir,
    )
    return parameters, bundle, {"params": retries}


def segment_clauses(
    description: str,
    parameters: list[Parameter],
    llm: LlmClient,
    prompts_dir: str | Path | None = None,
) -> tuple[Clause, list[Clause], str, dict[str, int]]:
    def validate(doc: dict[str, Any]) -> tuple[Clause, list[Clause], str]:
        objective_doc = doc.get("objective")
        if not objective_doc or not str(objective_doc.get("description", "")).strip():
            raise MissingObjective("segmentation produced no objective clause")
        background = str(doc.get("background", ""))
        if len(background) > BACKGROUND_CAP:
            notice = " ... [truncated]"
            background = background[: BACKGROUND_CAP - len(notice)] + notice
        objective = Clause(id="k0", kind="objective",
                           description=str(objective_doc["description"]))
        constraints = []
        for n, item in enumerate(doc.get("constraints", []), start=1):
            text = str(item.get("description", "")).strip()
            if not text:
                raise MalformedLLMOutput(f"constraint {n} has empty description")
            constraints.append(Clause(id=f"k{n}", kind="constraint", description=text))
        return objective, constraints, background

    (objective, constraints, background), retries = _staged_call(
        llm,
        "preprocess_segment",
        {"description": description, "parameters": _render_parameters(parameters)},
        validate,
        prompts_dir,
    )
    return objective, constraints, background, {"segment": retries}


def filter_clauses(
    objective: Clause,
    constraints: list[Clause],
    parameters: list[Parameter],
    background: str,
    llm: LlmClient,
    prompts_dir: str | Path | None = None,
) -> tuple[list[Clause], list[dict[str, str]], dict[str, int]]:
    clause_lines = [f"- {objective.id} (objective): {objective.description}"]
    clause_lines += [f"- {c.id} (constraint): {c.description}" for c in constraints]
    known_ids = {c.id for c in constraints}

    def validate(doc: dict[str, Any]) -> list[dict[str, str]]:
        removed = []
        for item in doc.get("removed", []):
            cid = str(item.get("id", ""))
            reason = str(item.get("reason", ""))
            if cid == objective.id:
                continue  # the objective is never removed
            if cid not in known_ids:
                raise MalformedLLMOutput(f"removal names unknown clause {cid!r}")
            if reason not in REMOVAL_REASONS:
                raise MalformedLLMOutput(f"unknown removal reason {reason!r}")
            removed.append({"id": cid, "reason": reason,
                            "description": next(c.description for c in constraints
                                                if c.id == cid)})
        return removed

    removed, retries = _staged_call(
        llm,
        "preprocess_filter",
        {
            "background": background,
            "parameters": _render_parameters(parameters),
            "clauses": "\n".join(clause_lines),
        },
        validate,
        prompts_dir,
    )
    removed_ids = {r["id"] for r in removed}
    kept = [c for c in constraints if c.id not in removed_ids]
    return kept, removed, {"filter": retries}


def preprocess(
    raw: RawProblem,
    llm: LlmClient,
    prompts_dir: str | Path | None = None,
) -> tuple[StructuredProblem, PreprocessReport]:
    report = PreprocessReport()
    parameters, bundle, r1 = extract_parameters(raw, llm, prompts_dir)
    report.parameter_count = len(parameters)
    report.retries.update(r1)
    objective, constraints, background, r2 = segment_clauses(
        raw.description, parameters, llm, prompts_dir
    )
    report.clauses_before_filter = 1 + len(constraints)
    report.retries.update(r2)
    kept, removed, r3 = filter_clauses(
        objective, constraints, parameters, background, llm, prompts_dir
    )
    report.removed = removed
    report.clauses_after_filter = 1 + len(kept)
    report.retries.update(r3)

    problem = StructuredProblem(background=background)
    for param in parameters:
        problem.add_entity(param)
    problem.add_entity(Clause(id="obj", kind="objective", description=objective.description))
    for n, clause in enumerate(kept, start=1):
        problem.add_entity(Clause(id=f"c{n}", kind="constraint", description=clause.description))
    problem.data = bundle
    violations = problem.validate()
    if violations:
        raise DataShapeMismatch(
            "preprocessed problem fails validation: " + "; ".join(map(str, violations))
        )
    return problem, report
