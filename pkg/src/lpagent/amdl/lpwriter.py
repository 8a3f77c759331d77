"""LP-file emission for FlatModel (documented subset, deterministic output)."""

from __future__ import annotations

import math

from ..errors import UnrepresentableStructure
from .flatmodel import FlatModel, Row


def _num(value: float) -> str:
    if value == int(value) and abs(value) < 1e15:
        return str(int(value))
    return format(value, ".12g")


def _terms(coeffs: dict[int, float], names: list[str]) -> str:
    parts: list[str] = []
    for j, a in coeffs.items():
        name = names[j]
        mag = abs(a)
        body = name if mag == 1.0 else f"{_num(mag)} {name}"
        if not parts:
            parts.append(body if a >= 0 else f"- {body}")
        else:
            parts.append(f"+ {body}" if a >= 0 else f"- {body}")
    return " ".join(parts) if parts else "0"


def _row_line(row: Row, names: list[str], prefix: str = "") -> str:
    if not row.coeffs:
        raise UnrepresentableStructure(f"row {row.name} has no variable terms")
    return f" {row.name}: {prefix}{_terms(row.coeffs, names)} {row.sense} {_num(row.rhs)}"


def emit_lp(model: FlatModel) -> str:
    problems = model.check_invariants()
    if problems:
        raise UnrepresentableStructure("; ".join(problems))
    if not model.variables:
        raise UnrepresentableStructure("model has no variables")
    names = [v.name for v in model.variables]
    lines: list[str] = []
    lines.append("Maximize" if model.sense == "max" else "Minimize")
    obj_coeffs = {j: a for j, a in enumerate(model.c) if a != 0.0}
    obj = _terms(obj_coeffs, names)
    if model.objective_offset:
        obj += f" + {_num(model.objective_offset)}" if model.objective_offset > 0 \
            else f" - {_num(-model.objective_offset)}"
    lines.append(f" obj: {obj}")
    lines.append("Subject To")
    for row in model.rows:
        lines.append(_row_line(row, names))
    for link in model.indicators:
        prefix = f"{names[link.bin_index]} = {link.active_value} -> "
        lines.append(_row_line(link.row, names, prefix=prefix))
    lines.append("Bounds")
    for v in model.variables:
        lo = "-inf" if v.lb == -math.inf else _num(v.lb)
        if v.ub == math.inf:
            lines.append(f" {v.name} >= {lo}")
        else:
            lines.append(f" {lo} <= {v.name} <= {_num(v.ub)}")
    generals = [v.name for v in model.variables if v.domain == "integer"]
    if generals:
        lines.append("Generals")
        for name in generals:
            lines.append(f" {name}")
    binaries = [v.name for v in model.variables if v.domain == "binary"]
    if binaries:
        lines.append("Binaries")
        for name in binaries:
            lines.append(f" {name}")
    if model.sos_groups:
        lines.append("SOS")
        for k, group in enumerate(model.sos_groups):
            if group.kind not in ("sos1", "sos2"):
                raise UnrepresentableStructure(f"unknown SOS kind {group.kind}")
            tag = "S1" if group.kind == "sos1" else "S2"
            members = " ".join(
                f"{names[j]}:{w}" for w, j in enumerate(group.var_indices, start=1)
            )
            lines.append(f" s{k + 1}: {tag}:: {members}")
    lines.append("End")
    return "\n".join(lines) + "\n"
