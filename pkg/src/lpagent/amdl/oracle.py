"""Brute-force ground-truth solver for desk-scale flat models.

Two regimes:
  * all-integer models with a bounded lattice (<= MAX_LATTICE points):
    exhaustive enumeration, exact optimum;
  * small continuous LPs (<= 3 variables, <= 12 rows): vertex enumeration
    over intersections of row/bound hyperplanes, plus a recession-ray check
    for unboundedness.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from ..errors import OracleScopeExceeded
from ._kernels import enumerate_lattice
from .flatmodel import FlatModel
from .solution import Solution

MAX_LATTICE = 10**6
MAX_CONT_VARS = 3
MAX_CONT_ROWS = 12
ORACLE_TOL = 1e-9


@dataclass
class CheckResult:
    feasible: bool
    max_violation: float
    objective: float


def check(model: FlatModel, assignment: dict[str, float], tol: float = ORACLE_TOL) -> CheckResult:
    """Largest constraint/bound/integrality violation of a full assignment."""
    names = [v.name for v in model.variables]
    missing = [n for n in names if n not in assignment]
    if missing:
        raise KeyError(f"assignment missing variables: {missing}")
    x = np.array([assignment[n] for n in names], dtype=np.float64)
    worst = 0.0
    for i, v in enumerate(model.variables):
        if v.lb != -math.inf:
            worst = max(worst, v.lb - x[i])
        if v.ub != math.inf:
            worst = max(worst, x[i] - v.ub)
        if v.domain in ("integer", "binary"):
            worst = max(worst, abs(x[i] - round(x[i])))
    for row in model.rows:
        lhs = sum(a * x[j] for j, a in row.coeffs.items())
        if row.sense == "<=":
            worst = max(worst, lhs - row.rhs)
        elif row.sense == ">=":
            worst = max(worst, row.rhs - lhs)
        else:
            worst = max(worst, abs(lhs - row.rhs))
    for link in model.indicators:
        if abs(x[link.bin_index] - link.active_value) <= tol:
            lhs = sum(a * x[j] for j, a in link.row.coeffs.items())
            if link.row.sense == "<=":
                worst = max(worst, lhs - link.row.rhs)
            elif link.row.sense == ">=":
                worst = max(worst, link.row.rhs - lhs)
            else:
                worst = max(worst, abs(lhs - link.row.rhs))
    for group in model.sos_groups:
        nonzero = [j for j in group.var_indices if abs(x[j]) > tol]
        limit = 1 if group.kind == "sos1" else 2
        if len(nonzero) > limit:
            worst = max(worst, float(len(nonzero) - limit))
        elif group.kind == "sos2" and len(nonzero) == 2:
            pos = [group.var_indices.index(j) for j in nonzero]
            if abs(pos[0] - pos[1]) != 1:
                worst = max(worst, 1.0)
    objective = model.objective_offset + sum(
        c * v for c, v in zip(model.c, x)
    )
    return CheckResult(feasible=worst <= tol, max_violation=float(worst), objective=float(objective))


def _dense_rows(model: FlatModel, n: int):
    m = len(model.rows)
    A = np.zeros((m, n))
    senses = np.zeros(m, dtype=np.int8)
    b = np.zeros(m)
    for i, row in enumerate(model.rows):
        for j, a in row.coeffs.items():
            A[i, j] = a
        senses[i] = -1 if row.sense == "<=" else (1 if row.sense == ">=" else 0)
        b[i] = row.rhs
    return A, senses, b


def _solve_integer(model: FlatModel) -> Solution:
    n = len(model.variables)
    lo = np.zeros(n, dtype=np.int64)
    sizes = np.zeros(n, dtype=np.int64)
    total = 1
    for j, v in enumerate(model.variables):
        if not (math.isfinite(v.lb) and math.isfinite(v.ub)):
            raise OracleScopeExceeded(f"{v.name}: integer enumeration needs finite bounds")
        lo[j] = math.ceil(v.lb - ORACLE_TOL)
        hi = math.floor(v.ub + ORACLE_TOL)
        sizes[j] = hi - lo[j] + 1
        if sizes[j] <= 0:
            return Solution(status="infeasible")
        total *= int(sizes[j])
        if total > MAX_LATTICE:
            raise OracleScopeExceeded(f"lattice exceeds {MAX_LATTICE} points")
    A, senses, b = _dense_rows(model, n)
    k = len(model.indicators)
    ind_bin = np.zeros(k, dtype=np.int64)
    ind_val = np.zeros(k)
    ind_A = np.zeros((k, n))
    ind_senses = np.zeros(k, dtype=np.int8)
    ind_b = np.zeros(k)
    for i, link in enumerate(model.indicators):
        ind_bin[i] = link.bin_index
        ind_val[i] = link.active_value
        for j, a in link.row.coeffs.items():
            ind_A[i, j] = a
        ind_senses[i] = -1 if link.row.sense == "<=" else (1 if link.row.sense == ">=" else 0)
        ind_b[i] = link.row.rhs
    c = np.array(model.c)
    # SOS feasibility is not in the kernels; post-filter via check() on the
    # numpy path would be wasteful, so enumerate through check() directly.
    if model.sos_groups:
        return _solve_integer_with_check(model, lo, sizes)
    found, obj, x = enumerate_lattice(
        lo, sizes, A, senses, b, ind_bin, ind_val, ind_A, ind_senses, ind_b,
        c, model.sense == "max", ORACLE_TOL,
    )
    if not found:
        return Solution(status="infeasible")
    values = {v.name: float(x[j]) for j, v in enumerate(model.variables)}
    return Solution(status="optimal", objective=float(obj) + model.objective_offset, values=values)


def _solve_integer_with_check(model: FlatModel, lo, sizes) -> Solution:
    names = [v.name for v in model.variables]
    best: Solution | None = None
    maximize = model.sense == "max"
    for combo in itertools.product(*(range(int(s)) for s in sizes)):
        point = {name: float(lo[j] + combo[j]) for j, name in enumerate(names)}
        result = check(model, point)
        if not result.feasible:
            continue
        if best is None or (maximize and result.objective > best.objective) or (
            not maximize and result.objective < best.objective
        ):
            best = Solution(status="optimal", objective=result.objective, values=dict(point))
    return best if best is not None else Solution(status="infeasible")


def _continuous_planes(model: FlatModel, n: int):
    planes = []  # (normal vector, offset)
    A, _, b = _dense_rows(model, n)
    for i in range(A.shape[0]):
        planes.append((A[i], b[i]))
    for j, v in enumerate(model.variables):
        e = np.zeros(n)
        e[j] = 1.0
        if math.isfinite(v.lb):
            planes.append((e, v.lb))
        if math.isfinite(v.ub):
            planes.append((e, v.ub))
    return planes


def _feasible_point(model: FlatModel, x: np.ndarray) -> bool:
    assignment = {v.name: float(x[j]) for j, v in enumerate(model.variables)}
    return check(model, assignment, tol=1e-7).feasible


def _improving_ray_exists(model: FlatModel, n: int) -> bool:
    """Vertex-enumerate the recession cone sliced by c.d = 1 (improving)."""
    A, senses, b = _dense_rows(model, n)
    c = np.array(model.c)
    if model.sense == "min":
        c = -c
    if not c.any():
        return False
    rows = [(A[i], senses[i]) for i in range(A.shape[0])]
    box: list[tuple[int, int]] = []  # (var, sign restriction)
    for j, v in enumerate(model.variables):
        if math.isfinite(v.lb) and math.isfinite(v.ub):
            box.append((j, 0))
        elif math.isfinite(v.lb):
            box.append((j, 1))
        elif math.isfinite(v.ub):
            box.append((j, -1))
    planes = [(c, 1.0)]
    for a, _ in rows:
        planes.append((a, 0.0))
    for j, _ in box:
        e = np.zeros(n)
        e[j] = 1.0
        planes.append((e, 0.0))

    def ray_ok(d: np.ndarray) -> bool:
        if abs(c @ d - 1.0) > 1e-7:
            return False
        for a, sense in rows:
            val = a @ d
            if sense < 0 and val > 1e-9:
                return False
            if sense > 0 and val < -1e-9:
                return False
            if sense == 0 and abs(val) > 1e-9:
                return False
        for j, restriction in box:
            if restriction == 0 and abs(d[j]) > 1e-9:
                return False
            if restriction == 1 and d[j] < -1e-9:
                return False
            if restriction == -1 and d[j] > 1e-9:
                return False
        return True

    for combo in itertools.combinations(range(len(planes)), n):
        M = np.array([planes[i][0] for i in combo])
        rhs = np.array([planes[i][1] for i in combo])
        if abs(np.linalg.det(M)) < 1e-12:
            continue
        d = np.linalg.solve(M, rhs)
        if ray_ok(d):
            return True
    return False


def _solve_continuous(model: FlatModel) -> Solution:
    n = len(model.variables)
    if n > MAX_CONT_VARS:
        raise OracleScopeExceeded(f"continuous enumeration limited to {MAX_CONT_VARS} variables")
    if len(model.rows) > MAX_CONT_ROWS:
        raise OracleScopeExceeded(f"continuous enumeration limited to {MAX_CONT_ROWS} rows")
    if model.sos_groups or model.indicators:
        raise OracleScopeExceeded("SOS/indicator structures need the integer path")
    planes = _continuous_planes(model, n)
    c = np.array(model.c)
    maximize = model.sense == "max"
    best_obj: float | None = None
    best_x: np.ndarray | None = None
    for combo in itertools.combinations(range(len(planes)), n):
        M = np.array([planes[i][0] for i in combo])
        rhs = np.array([planes[i][1] for i in combo])
        if abs(np.linalg.det(M)) < 1e-12:
            continue
        x = np.linalg.solve(M, rhs)
        if not _feasible_point(model, x):
            continue
        obj = float(c @ x)
        if best_obj is None or (maximize and obj > best_obj) or (not maximize and obj < best_obj):
            best_obj = obj
            best_x = x
    if _improving_ray_exists(model, n) and (best_obj is not None or _origin_like_feasible(model, n)):
        return Solution(status="unbounded")
    if best_obj is None:
        return Solution(status="infeasible")
    values = {v.name: float(best_x[j]) for j, v in enumerate(model.variables)}
    return Solution(status="optimal", objective=best_obj + model.objective_offset, values=values)


def _origin_like_feasible(model: FlatModel, n: int) -> bool:
    x = np.array([v.lb if math.isfinite(v.lb) else 0.0 for v in model.variables])
    return _feasible_point(model, x)


def oracle_solve(model: FlatModel) -> Solution:
    domains = {v.domain for v in model.variables}
    if not model.variables:
        raise OracleScopeExceeded("model has no variables")
    if domains <= {"integer", "binary"}:
        return _solve_integer(model)
    if domains == {"continuous"}:
        return _solve_continuous(model)
    raise OracleScopeExceeded("mixed integer/continuous models are out of oracle scope")
