"""Reference command-line solver for the emitted LP subset.

Invoked as a child process by the amdl execution backend:

    python -m lpagent.tools.lpsolve <model.lp> <out.sol> [--dialect A|B]

Parses the LP text, solves with scipy's HiGHS-backed `milp`, and writes the
solution file. Exits nonzero on unsupported structure or unreadable input so
the caller can surface a solver crash. Kept deliberately independent of the
in-process enumeration oracle: the two are compared against each other in
tests.
"""

from __future__ import annotations

import argparse
import math
import re
import sys

_TERM_RE = re.compile(r"([+-])?\s*(\d+\.?\d*(?:[eE][+-]?\d+)?)?\s*([A-Za-z_][A-Za-z0-9_]*)?")


class LpFormatError(Exception):
    pass


def _parse_terms(text: str) -> tuple[dict[str, float], float]:
    """Parse `3 x + 2 y - 4` into ({x: 3, y: 2}, -4)."""
    coeffs: dict[str, float] = {}
    const = 0.0
    tokens = text.replace("+", " + ").replace("-", " - ").split()
    sign = 1.0
    pending: float | None = None
    for tok in tokens:
        if tok == "+":
            if pending is not None:
                const += sign * pending
                pending = None
            sign = 1.0
        elif tok == "-":
            if pending is not None:
                const += sign * pending
                pending = None
            sign = -1.0
        else:
            try:
                value = float(tok)
            except ValueError:
                coef = sign * (pending if pending is not None else 1.0)
                coeffs[tok] = coeffs.get(tok, 0.0) + coef
                pending = None
                sign = 1.0
                continue
            if pending is not None:
                raise LpFormatError(f"two consecutive numbers near {tok!r}")
            pending = value
    if pending is not None:
        const += sign * pending
    return coeffs, const


def parse_lp(text: str) -> dict:
    sense = None
    objective: dict[str, float] = {}
    obj_const = 0.0
    rows: list[tuple[str, dict[str, float], str, float]] = []
    bounds: dict[str, tuple[float, float]] = {}
    integers: set[str] = set()
    binaries: set[str] = set()
    section = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("\\"):
            continue
        lowered = line.lower()
        if lowered in ("maximize", "minimize"):
            sense = lowered[:3]
            section = "objective"
            continue
        if lowered == "subject to":
            section = "rows"
            continue
        if lowered == "bounds":
            section = "bounds"
            continue
        if lowered == "generals":
            section = "generals"
            continue
        if lowered == "binaries":
            section = "binaries"
            continue
        if lowered == "sos":
            raise LpFormatError("SOS sections are not supported by this solver")
        if lowered == "end":
            break
        if section == "objective":
            _, body = line.split(":", 1)
            objective, obj_const = _parse_terms(body)
        elif section == "rows":
            name, body = line.split(":", 1)
            if "->" in body:
                raise LpFormatError("indicator rows are not supported by this solver")
            m = re.search(r"(<=|>=|=)", body)
            if not m:
                raise LpFormatError(f"row without sense: {line!r}")
            row_sense = m.group(1)
            lhs, rhs = body.rsplit(row_sense, 1)
            coeffs, const = _parse_terms(lhs)
            rows.append((name.strip(), coeffs, row_sense, float(rhs) - const))
        elif section == "bounds":
            m = re.match(r"^(\S+)\s*<=\s*([A-Za-z_]\w*)\s*<=\s*(\S+)$", line)
            if m:
                lo = -math.inf if m.group(1) == "-inf" else float(m.group(1))
                bounds[m.group(2)] = (lo, float(m.group(3)))
                continue
            m = re.match(r"^([A-Za-z_]\w*)\s*>=\s*(\S+)$", line)
            if m:
                lo = -math.inf if m.group(2) == "-inf" else float(m.group(2))
                bounds[m.group(1)] = (lo, math.inf)
                continue
            raise LpFormatError(f"unparseable bound: {line!r}")
        elif section == "generals":
            integers.add(line)
        elif section == "binaries":
            binaries.add(line)
        else:
            raise LpFormatError(f"line outside any section: {line!r}")
    if sense is None:
        raise LpFormatError("missing objective sense")
    return {
        "sense": sense,
        "objective": objective,
        "obj_const": obj_const,
        "rows": rows,
        "bounds": bounds,
        "integers": integers,
        "binaries": binaries,
    }


def solve(parsed: dict) -> tuple[str, float | None, dict[str, float]]:
    import numpy as np
    from scipy.optimize import Bounds, LinearConstraint, milp

    names: list[str] = list(parsed["bounds"].keys())
    for _, coeffs, _, _ in parsed["rows"]:
        for name in coeffs:
            if name not in names:
                names.append(name)
    for name in parsed["objective"]:
        if name not in names:
            names.append(name)
    index = {name: j for j, name in enumerate(names)}
    n = len(names)
    c = np.zeros(n)
    for name, coef in parsed["objective"].items():
        c[index[name]] = coef
    flip = parsed["sense"] == "max"
    lo = np.zeros(n)
    hi = np.full(n, np.inf)
    for name, (l, u) in parsed["bounds"].items():
        lo[index[name]] = l
        hi[index[name]] = u
    for name in parsed["binaries"]:
        lo[index[name]] = max(lo[index[name]], 0.0)
        hi[index[name]] = min(hi[index[name]], 1.0)
    integrality = np.zeros(n)
    for name in parsed["integers"] | parsed["binaries"]:
        integrality[index[name]] = 1
    constraints = []
    for _, coeffs, row_sense, rhs in parsed["rows"]:
        a = np.zeros(n)
        for name, coef in coeffs.items():
            a[index[name]] = coef
        if row_sense == "<=":
            constraints.append(LinearConstraint(a, -np.inf, rhs))
        elif row_sense == ">=":
            constraints.append(LinearConstraint(a, rhs, np.inf))
        else:
            constraints.append(LinearConstraint(a, rhs, rhs))
    res = milp(
        c=-c if flip else c,
        constraints=constraints,
        integrality=integrality,
        bounds=Bounds(lo, hi),
    )
    if res.status == 0:
        objective = float(c @ res.x) + parsed["obj_const"]
        values = {name: float(res.x[index[name]]) for name in names}
        return "optimal", objective, values
    if res.status == 2:
        return "infeasible", None, {}
    if res.status == 3:
        return "unbounded", None, {}
    raise LpFormatError(f"solver terminated abnormally: {res.message}")


def write_solution(path: str, dialect: str, status: str, objective: float | None,
                   values: dict[str, float]) -> None:
    lines: list[str] = []
    if dialect == "A":
        lines.append(status.capitalize())
        if status == "optimal":
            lines.append(f"obj {format(objective, '.12g')}")
    else:
        lines.append(f"Status: {status.capitalize()}")
        if status == "optimal":
            lines.append(f"Objective: {format(objective, '.12g')}")
    if status == "optimal":
        for name, value in values.items():
            if value != 0.0:
                lines.append(f"{name} {format(value, '.12g')}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="lpsolve")
    parser.add_argument("lp_path")
    parser.add_argument("sol_path")
    parser.add_argument("--dialect", choices=("A", "B"), default="A")
    args = parser.parse_args(argv)
    try:
        with open(args.lp_path) as fh:
            parsed = parse_lp(fh.read())
        status, objective, values = solve(parsed)
    except (LpFormatError, OSError, ValueError) as exc:
        print(f"lpsolve: {exc}", file=sys.stderr)
        return 1
    write_solution(args.sol_path, args.dialect, status, objective, values)
    return 0


if __name__ == "__main__":
    sys.exit(main())
