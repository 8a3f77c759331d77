"""Domain entities: parameters, variables, clauses, and the numeric data bundle."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Any

from ..errors import DataShapeMismatch, InvalidTransition, MalformedSymbol

SYMBOL_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")

# Variable lifecycle
V_DEFINED = "defined"
V_CODED = "coded"
V_CODE_FLAGGED = "code_flagged"

VARIABLE_TRANSITIONS = {
    V_DEFINED: {V_CODED},
    V_CODED: {V_CODE_FLAGGED},
    V_CODE_FLAGGED: {V_CODED},
}

# Clause lifecycle
C_DESCRIBED = "described"
C_FORMULATED = "formulated"
C_CODED = "coded"
C_VALIDATED = "validated"
C_FORMULATION_FLAGGED = "formulation_flagged"
C_CODE_FLAGGED = "code_flagged"

CLAUSE_TRANSITIONS = {
    C_DESCRIBED: {C_FORMULATED},
    C_FORMULATED: {C_CODED, C_FORMULATION_FLAGGED},
    C_CODED: {C_VALIDATED, C_CODE_FLAGGED, C_FORMULATION_FLAGGED},
    C_VALIDATED: {C_CODE_FLAGGED, C_FORMULATION_FLAGGED},
    C_CODE_FLAGGED: {C_CODED},
    C_FORMULATION_FLAGGED: {C_FORMULATED},
}

DOMAINS = ("continuous", "integer", "binary")


def check_symbol(symbol: str) -> str:
    if not SYMBOL_RE.match(symbol):
        raise MalformedSymbol(f"invalid identifier: {symbol!r}")
    return symbol


@dataclass
class Parameter:
    symbol: str
    shape: list[str | int] = field(default_factory=list)
    definition: str = ""

    def __post_init__(self):
        check_symbol(self.symbol)
        for dim in self.shape:
            if isinstance(dim, int):
                if dim <= 0:
                    raise MalformedSymbol(f"{self.symbol}: literal dimension must be positive")
            else:
                check_symbol(dim)


@dataclass
class Variable:
    symbol: str
    shape: list[str | int] = field(default_factory=list)
    domain: str = "continuous"
    definition: str = ""
    code: str | None = None
    status: str = V_DEFINED

    def __post_init__(self):
        check_symbol(self.symbol)
        for dim in self.shape:
            if not isinstance(dim, int):
                check_symbol(dim)
        if self.domain not in DOMAINS:
            raise MalformedSymbol(f"{self.symbol}: unknown domain {self.domain!r}")

    def set_status(self, target: str) -> None:
        if target not in VARIABLE_TRANSITIONS.get(self.status, set()):
            raise InvalidTransition(self.symbol, self.status, target)
        if target == V_CODED and not self.code:
            raise InvalidTransition(self.symbol, self.status, target)
        self.status = target


@dataclass
class Clause:
    id: str
    kind: str  # "objective" | "constraint"
    description: str = ""
    formulation: str | None = None
    code: str | None = None
    status: str = C_DESCRIBED
    annotation: dict[str, Any] | None = None  # structure tag from the technique pass

    def set_status(self, target: str) -> None:
        if target not in CLAUSE_TRANSITIONS.get(self.status, set()):
            raise InvalidTransition(self.id, self.status, target)
        if target == C_FORMULATED and not self.formulation:
            raise InvalidTransition(self.id, self.status, target)
        if target in (C_CODED, C_VALIDATED) and not self.code:
            raise InvalidTransition(self.id, self.status, target)
        self.status = target


@dataclass
class DataBundle:
    dimensions: dict[str, int] = field(default_factory=dict)
    values: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        for name, size in self.dimensions.items():
            if not isinstance(size, int) or size <= 0:
                raise DataShapeMismatch(f"dimension {name} must be a positive integer")

    def resolve_shape(self, shape: list[str | int]) -> list[int]:
        sizes = []
        for dim in shape:
            if isinstance(dim, int):
                sizes.append(dim)
            elif dim in self.dimensions:
                sizes.append(self.dimensions[dim])
            else:
                raise DataShapeMismatch(f"dimension {dim} not bound in data bundle")
        return sizes

    def check_value(self, symbol: str, shape: list[str | int]) -> None:
        """Verify the stored value for `symbol` matches the resolved shape exactly."""
        if symbol not in self.values:
            raise DataShapeMismatch(f"no value for parameter {symbol}")
        sizes = self.resolve_shape(shape)
        _check_nesting(symbol, self.values[symbol], sizes)


def _check_nesting(symbol: str, value: Any, sizes: list[int]) -> None:
    if not sizes:
        if isinstance(value, (list, tuple)):
            raise DataShapeMismatch(f"{symbol}: expected scalar, got array")
        if not isinstance(value, (int, float)):
            raise DataShapeMismatch(f"{symbol}: non-numeric value")
        return
    if not isinstance(value, (list, tuple)):
        raise DataShapeMismatch(f"{symbol}: expected array of length {sizes[0]}, got scalar")
    if len(value) != sizes[0]:
        raise DataShapeMismatch(
            f"{symbol}: expected length {sizes[0]}, got {len(value)}"
        )
    for item in value:
        _check_nesting(symbol, item, sizes[1:])
