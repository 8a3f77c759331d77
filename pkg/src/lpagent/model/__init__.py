from .entities import (
    Clause,
    DataBundle,
    Parameter,
    Variable,
    C_CODE_FLAGGED,
    C_CODED,
    C_DESCRIBED,
    C_FORMULATED,
    C_FORMULATION_FLAGGED,
    C_VALIDATED,
    V_CODE_FLAGGED,
    V_CODED,
    V_DEFINED,
)
from .context import ContextPacket, extract_context
from .problem import ConnectionGraph, StructuredProblem, Violation
from .serialize import (
    graph_to_dot,
    problem_from_dict,
    problem_from_json,
    problem_to_dict,
    problem_to_json,
)

__all__ = [
    "Clause",
    "ConnectionGraph",
    "ContextPacket",
    "DataBundle",
    "Parameter",
    "StructuredProblem",
    "Variable",
    "Violation",
    "extract_context",
    "graph_to_dot",
    "problem_from_dict",
    "problem_from_json",
    "problem_to_dict",
    "problem_to_json",
    "C_CODE_FLAGGED",
    "C_CODED",
    "C_DESCRIBED",
    "C_FORMULATED",
    "C_FORMULATION_FLAGGED",
    "C_VALIDATED",
    "V_CODE_FLAGGED",
    "V_CODED",
    "V_DEFINED",
]
