"""Solution types and solver output parsing (dialects A and B)."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from ..errors import UnknownVariableName, UnparseableSolution
from .flatmodel import FlatModel

log = logging.getLogger(__name__)

_STATUS_WORDS = {
    "optimal": "optimal",
    "infeasible": "infeasible",
    "unbounded": "unbounded",
}


@dataclass
class Solution:
    status: str  # optimal | infeasible | unbounded
    objective: float | None = None
    values: dict[str, float] = field(default_factory=dict)


def _parse_body(lines: list[str], model: FlatModel) -> tuple[float | None, dict[str, float]]:
    names = {v.name for v in model.variables}
    objective: float | None = None
    values: dict[str, float] = {}
    for line in lines:
        line = line.strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise UnparseableSolution(f"bad value line: {line!r}")
        name, raw = parts
        try:
            value = float(raw)
        except ValueError as exc:
            raise UnparseableSolution(f"bad number in line: {line!r}") from exc
        if name == "obj":
            objective = value
        elif name in names:
            values[name] = value
        else:
            raise UnknownVariableName(name)
    missing = [v.name for v in model.variables if v.name not in values]
    if missing:
        log.warning("solution omits %d variables; defaulting to 0", len(missing))
        for name in missing:
            values[name] = 0.0
    return objective, values


def parse_solution(text: str, model: FlatModel, dialect: str = "A") -> Solution:
    lines = text.splitlines()
    if not lines:
        raise UnparseableSolution("empty solver output")
    if dialect == "A":
        status = _STATUS_WORDS.get(lines[0].strip().lower())
        if status is None:
            raise UnparseableSolution(f"unknown status line: {lines[0]!r}")
        body = lines[1:]
    elif dialect == "B":
        status = None
        objective_line: float | None = None
        body = []
        for line in lines:
            stripped = line.strip()
            if stripped.lower().startswith("status:"):
                status = _STATUS_WORDS.get(stripped.split(":", 1)[1].strip().lower())
            elif stripped.lower().startswith("objective:"):
                body.append("obj " + stripped.split(":", 1)[1].strip())
            else:
                body.append(line)
        if status is None:
            raise UnparseableSolution("dialect B output missing Status: line")
    else:
        raise UnparseableSolution(f"unknown solution dialect {dialect!r}")
    if status != "optimal":
        return Solution(status=status)
    objective, values = _parse_body(body, model)
    if objective is None:
        raise UnparseableSolution("optimal solution missing objective value")
    return Solution(status="optimal", objective=objective, values=values)
