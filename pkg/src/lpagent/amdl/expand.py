"""Data-driven expansion of AMDL statements into a flat MILP."""

from __future__ import annotations

import itertools
from typing import Any, Iterator

from ..errors import (
    IndexOutOfRange,
    LpAgentError,
    NonlinearTerm,
    UnboundDimension,
    UnknownSymbol,
    UnrepresentableStructure,
)
from ..model.entities import DataBundle
from .ast import (
    ConstraintStmt,
    IndexExpr,
    LinExpr,
    ObjectiveStmt,
    SosStmt,
    Statement,
    SumExpr,
    SymbolRef,
    VarDecl,
)
from .flatmodel import INT_DEFAULT_UB, FlatModel, FlatVar, IndicatorLink, Row, SosGroup

MAX_DIMS = 3


def flat_name(symbol: str, indices: tuple[int, ...]) -> str:
    if not indices:
        return symbol
    return symbol + "_" + "_".join(str(i) for i in indices)


class _VarTable:
    """Maps declared variable symbols to contiguous flat index ranges (row-major)."""

    def __init__(self) -> None:
        self.entries: dict[str, tuple[int, list[int]]] = {}  # symbol -> (base, sizes)
        self.count = 0

    def add(self, symbol: str, sizes: list[int]) -> int:
        base = self.count
        self.entries[symbol] = (base, sizes)
        total = 1
        for s in sizes:
            total *= s
        self.count = base + total
        return base

    def flat_index(self, symbol: str, indices: tuple[int, ...]) -> int:
        base, sizes = self.entries[symbol]
        if len(indices) != len(sizes):
            raise IndexOutOfRange(
                f"{symbol}: expected {len(sizes)} indices, got {len(indices)}"
            )
        offset = 0
        for idx, size in zip(indices, sizes):
            if not (0 <= idx < size):
                raise IndexOutOfRange(f"{symbol}: index {idx} out of range [0,{size})")
            offset = offset * size + idx
        return base + offset


def _dim_size(dim: str, data: DataBundle) -> int:
    if dim not in data.dimensions:
        raise UnboundDimension(f"dimension {dim} not bound in data")
    return data.dimensions[dim]


def _resolve_index(expr: IndexExpr, env: dict[str, int]) -> int:
    if expr.var is None:
        return expr.offset
    if expr.var not in env:
        raise UnknownSymbol(f"unbound index variable {expr.var}")
    return env[expr.var] + expr.offset


def _param_value(ref: SymbolRef, data: DataBundle, env: dict[str, int]) -> float:
    value: Any = data.values[ref.symbol]
    for idx_expr in ref.indices:
        idx = _resolve_index(idx_expr, env)
        if not isinstance(value, (list, tuple)):
            raise IndexOutOfRange(f"{ref.symbol}: too many indices")
        if not (0 <= idx < len(value)):
            raise IndexOutOfRange(f"{ref.symbol}: index {idx} out of range [0,{len(value)})")
        value = value[idx]
    if isinstance(value, (list, tuple)):
        raise IndexOutOfRange(f"{ref.symbol}: missing indices")
    return float(value)


class _Expander:
    def __init__(self, data: DataBundle):
        self.data = data
        self.table = _VarTable()
        self.model = FlatModel()

    def declare(self, decl: VarDecl) -> None:
        if decl.name in self.table.entries:
            raise UnknownSymbol(f"variable {decl.name} declared twice")
        if len(decl.quantifiers) > MAX_DIMS:
            raise UnboundDimension(f"{decl.name}: at most {MAX_DIMS} dimensions supported")
        sizes = [_dim_size(q.dim, self.data) for q in decl.quantifiers]
        self.table.add(decl.name, sizes)
        if decl.domain == "binary":
            lb = 0.0 if decl.lb is None else max(0.0, decl.lb)
            ub = 1.0 if decl.ub is None else min(1.0, decl.ub)
        elif decl.domain == "integer":
            lb = 0.0 if decl.lb is None else decl.lb
            ub = INT_DEFAULT_UB if decl.ub is None else decl.ub
        else:
            lb = 0.0 if decl.lb is None else decl.lb
            ub = float("inf") if decl.ub is None else decl.ub
        for indices in itertools.product(*(range(s) for s in sizes)):
            self.model.variables.append(
                FlatVar(flat_name(decl.name, indices), lb, ub, decl.domain)
            )

    def eval_linexpr(
        self, expr: LinExpr, env: dict[str, int]
    ) -> tuple[float, dict[int, float]]:
        const = 0.0
        coeffs: dict[int, float] = {}
        for item in expr.items:
            if isinstance(item, SumExpr):
                size = _dim_size(item.dim, self.data)
                for k in range(size):
                    sub_env = dict(env)
                    sub_env[item.index] = k
                    c, cf = self.eval_linexpr(item.body, sub_env)
                    const += item.sign * c
                    for j, a in cf.items():
                        coeffs[j] = coeffs.get(j, 0.0) + item.sign * a
            else:
                value = item.sign * item.number
                var_ref: SymbolRef | None = None
                for ref in item.refs:
                    if ref.symbol in self.table.entries:
                        if var_ref is not None:
                            raise NonlinearTerm(
                                f"product of variables {var_ref.symbol} and {ref.symbol}"
                            )
                        var_ref = ref
                    elif ref.symbol in self.data.values:
                        value *= _param_value(ref, self.data, env)
                    else:
                        raise UnknownSymbol(f"unknown symbol {ref.symbol}")
                if var_ref is None:
                    const += value
                else:
                    indices = tuple(_resolve_index(i, env) for i in var_ref.indices)
                    j = self.table.flat_index(var_ref.symbol, indices)
                    coeffs[j] = coeffs.get(j, 0.0) + value
        return const, coeffs

    def _quant_tuples(self, quants) -> Iterator[dict[str, int]]:
        if len(quants) > MAX_DIMS:
            raise UnboundDimension(f"at most {MAX_DIMS} quantifier dimensions supported")
        sizes = [_dim_size(q.dim, self.data) for q in quants]
        for combo in itertools.product(*(range(s) for s in sizes)):
            yield {q.index: v for q, v in zip(quants, combo)}

    def add_constraint(self, clause_id: str, stmt: ConstraintStmt) -> None:
        for n, env in enumerate(self._quant_tuples(stmt.quantifiers)):
            lc, lcf = self.eval_linexpr(stmt.lhs, env)
            rc, rcf = self.eval_linexpr(stmt.rhs, env)
            coeffs = dict(lcf)
            for j, a in rcf.items():
                coeffs[j] = coeffs.get(j, 0.0) - a
            coeffs = {j: a for j, a in sorted(coeffs.items()) if a != 0.0}
            name = clause_id if not stmt.quantifiers else f"{clause_id}_{n}"
            row = Row(name=name, coeffs=coeffs, sense=stmt.sense, rhs=rc - lc,
                      clause_id=clause_id)
            if stmt.indicator is not None:
                ref, active = stmt.indicator
                if ref.symbol not in self.table.entries:
                    raise UnknownSymbol(f"unknown indicator variable {ref.symbol}")
                indices = tuple(_resolve_index(i, env) for i in ref.indices)
                bin_idx = self.table.flat_index(ref.symbol, indices)
                if self.model.variables[bin_idx].domain != "binary":
                    raise UnrepresentableStructure(
                        f"indicator variable {ref.symbol} is not binary"
                    )
                self.model.indicators.append(
                    IndicatorLink(bin_index=bin_idx, active_value=active, row=row,
                                  clause_id=clause_id)
                )
            else:
                self.model.rows.append(row)

    def add_objective(self, clause_id: str, stmt: ObjectiveStmt) -> None:
        const, coeffs = self.eval_linexpr(stmt.expr, {})
        self.model.sense = stmt.sense
        self.model.objective_offset = const
        self.model.c = [0.0] * self.table.count
        for j, a in coeffs.items():
            self.model.c[j] = a

    def add_sos(self, clause_id: str, stmt: SosStmt) -> None:
        indices: list[int] = []
        envs = [{}] if stmt.quantifier is None else list(
            self._quant_tuples([stmt.quantifier])
        )
        for env in envs:
            for ref in stmt.members:
                if ref.symbol not in self.table.entries:
                    raise UnknownSymbol(f"unknown SOS member {ref.symbol}")
                member = tuple(_resolve_index(i, env) for i in ref.indices)
                indices.append(self.table.flat_index(ref.symbol, member))
        self.model.sos_groups.append(
            SosGroup(kind=stmt.kind, var_indices=indices, clause_id=clause_id)
        )


def expand(statements: list[tuple[str, Statement]], data: DataBundle) -> FlatModel:
    """Expand (entity id, statement) pairs into a FlatModel.

    Variable declarations must precede statements that reference them; errors
    raised while expanding a statement carry the entity id in `entity_id`.
    """
    exp = _Expander(data)
    # declare all variables first so constraint order does not matter
    for entity_id, stmt in statements:
        if isinstance(stmt, VarDecl):
            _attributed(exp.declare, entity_id, stmt, unary=True)
    exp.model.c = [0.0] * exp.table.count
    for entity_id, stmt in statements:
        if isinstance(stmt, ConstraintStmt):
            _attributed(exp.add_constraint, entity_id, stmt)
        elif isinstance(stmt, ObjectiveStmt):
            _attributed(exp.add_objective, entity_id, stmt)
        elif isinstance(stmt, SosStmt):
            _attributed(exp.add_sos, entity_id, stmt)
    return exp.model


def _attributed(fn, entity_id: str, stmt, unary: bool = False):
    try:
        return fn(stmt) if unary else fn(entity_id, stmt)
    except LpAgentError as exc:
        exc.entity_id = entity_id  # type: ignore[attr-defined]
        raise
