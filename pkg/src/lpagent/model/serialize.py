"""JSON and DOT serialization of structured problems (the problem.json layout)."""

from __future__ import annotations

import json
from typing import Any

from .entities import Clause, DataBundle, Parameter, Variable
from .problem import ConnectionGraph, StructuredProblem


def problem_to_dict(problem: StructuredProblem) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "background": problem.background,
        "parameters": [
            {"symbol": p.symbol, "shape": p.shape, "definition": p.definition}
            for p in problem.parameters.values()
        ],
        "variables": [
            {
                "symbol": v.symbol,
                "shape": v.shape,
                "domain": v.domain,
                "definition": v.definition,
                "code": v.code,
                "status": v.status,
            }
            for v in problem.variables.values()
        ],
        "clauses": [
            {
                "id": c.id,
                "kind": c.kind,
                "description": c.description,
                "formulation": c.formulation,
                "code": c.code,
                "status": c.status,
                "annotation": c.annotation,
            }
            for c in problem.clauses.values()
        ],
        "graph": {
            "clause_param_edges": sorted(problem.graph.clause_param_edges),
            "clause_var_edges": sorted(problem.graph.clause_var_edges),
        },
    }
    if problem.data is not None:
        doc["data"] = {"dimensions": problem.data.dimensions, "values": problem.data.values}
    return doc


def problem_to_json(problem: StructuredProblem) -> str:
    return json.dumps(problem_to_dict(problem), indent=2, ensure_ascii=False) + "\n"


def problem_from_dict(doc: dict[str, Any]) -> StructuredProblem:
    problem = StructuredProblem(background=doc.get("background", ""))
    for p in doc.get("parameters", []):
        problem.add_entity(Parameter(p["symbol"], list(p.get("shape", [])), p.get("definition", "")))
    for v in doc.get("variables", []):
        problem.add_entity(
            Variable(
                v["symbol"],
                list(v.get("shape", [])),
                v.get("domain", "continuous"),
                v.get("definition", ""),
                v.get("code"),
                v.get("status", "defined"),
            )
        )
    for c in doc.get("clauses", []):
        problem.add_entity(
            Clause(
                c["id"],
                c["kind"],
                c.get("description", ""),
                c.get("formulation"),
                c.get("code"),
                c.get("status", "described"),
                c.get("annotation"),
            )
        )
    graph = doc.get("graph", {})
    problem.graph = ConnectionGraph(
        clause_param_edges={tuple(e) for e in graph.get("clause_param_edges", [])},
        clause_var_edges={tuple(e) for e in graph.get("clause_var_edges", [])},
    )
    if "data" in doc:
        problem.data = DataBundle(doc["data"].get("dimensions", {}), doc["data"].get("values", {}))
    return problem


def problem_from_json(text: str) -> StructuredProblem:
    return problem_from_dict(json.loads(text))


def graph_to_dot(problem: StructuredProblem) -> str:
    lines = ["digraph connections {", "  rankdir=LR;"]
    for c in problem.clauses.values():
        shape = "doubleoctagon" if c.kind == "objective" else "box"
        lines.append(f'  "{c.id}" [shape={shape}];')
    for p in problem.parameters.values():
        lines.append(f'  "{p.symbol}" [shape=ellipse];')
    for v in problem.variables.values():
        lines.append(f'  "{v.symbol}" [shape=diamond];')
    for cid, sym in sorted(problem.graph.clause_param_edges):
        lines.append(f'  "{cid}" -> "{sym}";')
    for cid, sym in sorted(problem.graph.clause_var_edges):
        lines.append(f'  "{cid}" -> "{sym}" [style=dashed];')
    lines.append("}")
    return "\n".join(lines) + "\n"
