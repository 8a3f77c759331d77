"""AST node types for AMDL statements."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class IndexExpr:
    """An index inside `[...]`: a literal, or a bound index var plus offset."""

    var: str | None = None
    offset: int = 0

    def __str__(self) -> str:
        if self.var is None:
            return str(self.offset)
        if self.offset == 0:
            return self.var
        sign = "+" if self.offset > 0 else "-"
        return f"{self.var}{sign}{abs(self.offset)}"


@dataclass(frozen=True)
class SymbolRef:
    """Reference to a parameter or variable, optionally subscripted."""

    symbol: str
    indices: tuple[IndexExpr, ...] = ()

    def __str__(self) -> str:
        if not self.indices:
            return self.symbol
        return f"{self.symbol}[{','.join(str(i) for i in self.indices)}]"


@dataclass
class Term:
    """Product of a numeric literal and symbol references; at most one may be a variable."""

    sign: float = 1.0
    number: float = 1.0
    refs: list[SymbolRef] = field(default_factory=list)


@dataclass
class SumExpr:
    """`sum(i in Dim) body` where body is a linear expression."""

    sign: float
    index: str
    dim: str
    body: LinExpr


@dataclass
class LinExpr:
    """Signed sum of terms, nested sums, and numeric constants."""

    items: list[Term | SumExpr] = field(default_factory=list)


@dataclass
class Quantifier:
    index: str
    dim: str


@dataclass
class VarDecl:
    name: str
    quantifiers: list[Quantifier] = field(default_factory=list)
    lb: float | None = None
    ub: float | None = None
    domain: str = "continuous"


@dataclass
class ConstraintStmt:
    quantifiers: list[Quantifier] = field(default_factory=list)
    lhs: LinExpr = field(default_factory=LinExpr)
    sense: str = "<="  # "<=", "=", ">="
    rhs: LinExpr = field(default_factory=LinExpr)
    indicator: tuple[SymbolRef, int] | None = None  # (binary var ref, active value)


@dataclass
class ObjectiveStmt:
    sense: str  # "min" | "max"
    expr: LinExpr = field(default_factory=LinExpr)


@dataclass
class SosStmt:
    kind: str  # "sos1" | "sos2"
    quantifier: Quantifier | None = None
    members: list[SymbolRef] = field(default_factory=list)


Statement = VarDecl | ConstraintStmt | ObjectiveStmt | SosStmt
