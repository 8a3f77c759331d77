"""Flat (fully numeric) MILP representation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

INT_DEFAULT_UB = 1e9


@dataclass
class FlatVar:
    name: str
    lb: float
    ub: float
    domain: str  # continuous | integer | binary


@dataclass
class Row:
    name: str
    coeffs: dict[int, float]  # var index -> coefficient
    sense: str  # "<=", "=", ">="
    rhs: float
    clause_id: str = ""


@dataclass
class SosGroup:
    kind: str  # "sos1" | "sos2"
    var_indices: list[int]
    clause_id: str = ""


@dataclass
class IndicatorLink:
    bin_index: int
    active_value: int  # 0 or 1
    row: Row
    clause_id: str = ""


@dataclass
class FlatModel:
    sense: str = "min"  # objective sense
    c: list[float] = field(default_factory=list)
    objective_offset: float = 0.0
    variables: list[FlatVar] = field(default_factory=list)
    rows: list[Row] = field(default_factory=list)
    sos_groups: list[SosGroup] = field(default_factory=list)
    indicators: list[IndicatorLink] = field(default_factory=list)

    def var_index(self, name: str) -> int | None:
        for i, v in enumerate(self.variables):
            if v.name == name:
                return i
        return None

    @property
    def integrality(self) -> set[int]:
        return {i for i, v in enumerate(self.variables) if v.domain in ("integer", "binary")}

    def check_invariants(self) -> list[str]:
        problems = []
        n = len(self.variables)
        if len(self.c) != n:
            problems.append(f"objective length {len(self.c)} != {n} variables")
        for i, v in enumerate(self.variables):
            if v.lb > v.ub:
                problems.append(f"{v.name}: lb {v.lb} > ub {v.ub}")
            if v.domain == "binary" and (v.lb < 0 or v.ub > 1):
                problems.append(f"{v.name}: binary bounds must be within [0,1]")
        for row in self.rows + [link.row for link in self.indicators]:
            for j, a in row.coeffs.items():
                if not (0 <= j < n):
                    problems.append(f"row {row.name}: coefficient on unknown variable {j}")
                if not math.isfinite(a):
                    problems.append(f"row {row.name}: non-finite coefficient")
            if not math.isfinite(row.rhs):
                problems.append(f"row {row.name}: non-finite rhs")
        for coef in self.c:
            if not math.isfinite(coef):
                problems.append("non-finite objective coefficient")
        return problems
