"""Structured problem state and the clause/entity connection graph."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..errors import (
    DataShapeMismatch,
    DuplicateObjective,
    DuplicateSymbol,
    UnknownClause,
    UnknownSymbol,
)
from .entities import (
    C_DESCRIBED,
    Clause,
    DataBundle,
    Parameter,
    Variable,
    check_symbol,
)

_WORD_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
_MATH_DELIMS = re.compile(r"(\\\(|\\\)|\\\[|\\\]|\$+|\\[a-zA-Z]+|[{}^_])")


@dataclass
class ConnectionGraph:
    """Bipartite edges from clauses to the parameters/variables they mention."""

    clause_param_edges: set[tuple[str, str]] = field(default_factory=set)
    clause_var_edges: set[tuple[str, str]] = field(default_factory=set)

    def symbols_of(self, clause_id: str) -> set[str]:
        return {s for c, s in self.clause_param_edges if c == clause_id} | {
            s for c, s in self.clause_var_edges if c == clause_id
        }

    def drop_clause(self, clause_id: str) -> None:
        self.clause_param_edges = {e for e in self.clause_param_edges if e[0] != clause_id}
        self.clause_var_edges = {e for e in self.clause_var_edges if e[0] != clause_id}

    def drop_symbol(self, symbol: str) -> None:
        self.clause_param_edges = {e for e in self.clause_param_edges if e[1] != symbol}
        self.clause_var_edges = {e for e in self.clause_var_edges if e[1] != symbol}


@dataclass
class Violation:
    entity: str
    rule: str
    message: str

    def __str__(self) -> str:
        return f"{self.entity}: {self.rule}: {self.message}"


@dataclass
class StructuredProblem:
    background: str = ""
    parameters: dict[str, Parameter] = field(default_factory=dict)
    variables: dict[str, Variable] = field(default_factory=dict)
    clauses: dict[str, Clause] = field(default_factory=dict)
    graph: ConnectionGraph = field(default_factory=ConnectionGraph)
    data: DataBundle | None = None

    # -- entity management --

    def add_entity(self, entity: Parameter | Variable | Clause) -> None:
        if isinstance(entity, Clause):
            if entity.id in self.clauses:
                raise DuplicateSymbol(f"clause id {entity.id} already present")
            if entity.kind == "objective" and any(
                c.kind == "objective" for c in self.clauses.values()
            ):
                raise DuplicateObjective("problem already has an objective clause")
            self.clauses[entity.id] = entity
            return
        check_symbol(entity.symbol)
        if entity.symbol in self.parameters or entity.symbol in self.variables:
            raise DuplicateSymbol(f"symbol {entity.symbol} already present")
        if isinstance(entity, Parameter):
            self.parameters[entity.symbol] = entity
        else:
            self.variables[entity.symbol] = entity

    def remove_clause(self, clause_id: str) -> None:
        if clause_id not in self.clauses:
            raise UnknownClause(clause_id)
        del self.clauses[clause_id]
        self.graph.drop_clause(clause_id)

    def remove_symbol(self, symbol: str) -> None:
        if symbol in self.parameters:
            del self.parameters[symbol]
        elif symbol in self.variables:
            del self.variables[symbol]
        else:
            raise UnknownSymbol(symbol)
        self.graph.drop_symbol(symbol)

    # -- graph --

    def connect(self, clause_id: str, symbol: str) -> None:
        if clause_id not in self.clauses:
            raise UnknownClause(clause_id)
        if symbol in self.parameters:
            self.graph.clause_param_edges.add((clause_id, symbol))
        elif symbol in self.variables:
            self.graph.clause_var_edges.add((clause_id, symbol))
        else:
            raise UnknownSymbol(symbol)

    def replace_edges(self, clause_id: str, symbols: list[str]) -> None:
        """Reset a clause's edges to exactly the given symbols."""
        self.graph.drop_clause(clause_id)
        for symbol in symbols:
            self.connect(clause_id, symbol)

    # -- helpers --

    @property
    def objective(self) -> Clause | None:
        for clause in self.clauses.values():
            if clause.kind == "objective":
                return clause
        return None

    def clause_ids(self) -> list[str]:
        """Clause ids in canonical order: objective first, then insertion order."""
        ids = [c.id for c in self.clauses.values() if c.kind == "objective"]
        ids += [c.id for c in self.clauses.values() if c.kind != "objective"]
        return ids

    def formulation_symbols(self, clause: Clause) -> set[str]:
        """Known symbols mentioned as whole words in a clause's formulation."""
        if not clause.formulation:
            return set()
        text = _MATH_DELIMS.sub(" ", clause.formulation)
        known = set(self.parameters) | set(self.variables)
        return {w for w in _WORD_RE.findall(text) if w in known}

    # -- validation --

    def validate(self) -> list[Violation]:
        out: list[Violation] = []
        objectives = [c for c in self.clauses.values() if c.kind == "objective"]
        if len(objectives) != 1:
            out.append(
                Violation("problem", "single_objective", f"found {len(objectives)} objectives")
            )
        for clause in self.clauses.values():
            if clause.status != C_DESCRIBED and not clause.formulation:
                out.append(Violation(clause.id, "formulation_required",
                                     f"status {clause.status} with empty formulation"))
            if clause.status in ("coded", "validated") and not clause.code:
                out.append(Violation(clause.id, "code_required",
                                     f"status {clause.status} with empty code"))
            linked = self.graph.symbols_of(clause.id)
            for symbol in sorted(self.formulation_symbols(clause) - linked):
                out.append(Violation(clause.id, "unlinked_symbol",
                                     f"unlinked symbol {symbol} in {clause.id}"))
        for var in self.variables.values():
            if var.status == "coded" and not var.code:
                out.append(Violation(var.symbol, "code_required", "coded without code"))
        for clause_id, symbol in sorted(
            self.graph.clause_param_edges | self.graph.clause_var_edges
        ):
            if clause_id not in self.clauses:
                out.append(Violation(clause_id, "dangling_edge", f"edge to {symbol}"))
            elif symbol not in self.parameters and symbol not in self.variables:
                out.append(Violation(symbol, "dangling_edge", f"edge from {clause_id}"))
        if self.data is not None:
            for entity in list(self.parameters.values()) + list(self.variables.values()):
                for dim in entity.shape:
                    if isinstance(dim, str) and dim not in self.data.dimensions:
                        out.append(Violation(entity.symbol, "unbound_dimension",
                                             f"dimension {dim} not in data bundle"))
            for param in self.parameters.values():
                try:
                    self.data.check_value(param.symbol, param.shape)
                except DataShapeMismatch as exc:
                    out.append(Violation(param.symbol, "data_shape", str(exc)))
        return out
