from .ast import (
    ConstraintStmt,
    IndexExpr,
    LinExpr,
    ObjectiveStmt,
    Quantifier,
    SosStmt,
    Statement,
    SumExpr,
    SymbolRef,
    Term,
    VarDecl,
)
from .expand import expand, flat_name
from .flatmodel import FlatModel, FlatVar, IndicatorLink, Row, SosGroup
from .lpwriter import emit_lp
from .oracle import CheckResult, check, oracle_solve
from .parser import parse_amdl, tokenize
from .solution import Solution, parse_solution

__all__ = [
    "CheckResult",
    "ConstraintStmt",
    "FlatModel",
    "FlatVar",
    "IndexExpr",
    "IndicatorLink",
    "LinExpr",
    "ObjectiveStmt",
    "Quantifier",
    "Row",
    "Solution",
    "SosGroup",
    "SosStmt",
    "Statement",
    "SumExpr",
    "SymbolRef",
    "Term",
    "VarDecl",
    "check",
    "emit_lp",
    "expand",
    "flat_name",
    "oracle_solve",
    "parse_amdl",
    "parse_solution",
    "tokenize",
]
