"""Graph-driven context extraction for prompt construction.

The packet for a clause contains the background, the clause itself, and
exactly the entities the connection graph links to it, so prompt size is
independent of problem size.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import UnknownClause
from .entities import Clause, Parameter, Variable
from .problem import StructuredProblem

DETAIL_LEVELS = ("definitions", "formulations", "code")


@dataclass
class ContextPacket:
    background: str
    clause: Clause
    parameters: list[Parameter] = field(default_factory=list)
    variables: list[Variable] = field(default_factory=list)
    detail: str = "definitions"

    def render(self) -> str:
        lines = [f"Background: {self.background}"]
        lines.append(f"Clause {self.clause.id} ({self.clause.kind}): {self.clause.description}")
        if self.detail in ("formulations", "code"):
            lines.append(f"Formulation: {self.clause.formulation or 'not yet written'}")
        if self.detail == "code":
            lines.append(f"Code: {self.clause.code or 'not yet written'}")
        if self.clause.annotation:
            tag = ", ".join(f"{k}={v}" for k, v in self.clause.annotation.items())
            lines.append(f"Structure: {tag}")
        lines.append("Related parameters:")
        if not self.parameters:
            lines.append("- (none)")
        for p in self.parameters:
            lines.append(f"- {p.symbol}: shape {_shape(p.shape)} -- {p.definition}")
        lines.append("Related variables:")
        if not self.variables:
            lines.append("- (none)")
        for v in self.variables:
            line = f"- {v.symbol}: shape {_shape(v.shape)}, {v.domain} -- {v.definition}"
            if self.detail == "code":
                line += f" [code: {v.code or 'not yet written'}]"
            lines.append(line)
        return "\n".join(lines)


def _shape(shape: list[str | int]) -> str:
    return "[" + ", ".join(str(d) for d in shape) + "]" if shape else "scalar"


def extract_context(
    problem: StructuredProblem, clause_id: str, detail: str = "definitions"
) -> ContextPacket:
    if clause_id not in problem.clauses:
        raise UnknownClause(clause_id)
    if detail not in DETAIL_LEVELS:
        raise ValueError(f"unknown detail level {detail!r}")
    linked = problem.graph.symbols_of(clause_id)
    # insertion order keeps rendered packets byte-stable across runs
    params = [p for p in problem.parameters.values() if p.symbol in linked]
    variables = [v for v in problem.variables.values() if v.symbol in linked]
    return ContextPacket(
        background=problem.background,
        clause=problem.clauses[clause_id],
        parameters=params,
        variables=variables,
        detail=detail,
    )
