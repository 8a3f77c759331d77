"""Dual-route check: enumeration oracle vs the shipped subprocess solver."""

import random
import subprocess
import sys
import time

import pytest

from lpagent.amdl import emit_lp
from lpagent.amdl.flatmodel import FlatModel, FlatVar, Row
from lpagent.amdl.oracle import check, oracle_solve
from lpagent.amdl.solution import parse_solution


def random_integer_model(rng: random.Random) -> FlatModel:
    n = rng.randint(1, 3)
    variables = []
    for j in range(n):
        if rng.random() < 0.4:
            variables.append(FlatVar(f"v_{j}", 0, 1, "binary"))
        else:
            variables.append(FlatVar(f"v_{j}", 0, rng.randint(1, 6), "integer"))
    rows = []
    for k in range(rng.randint(1, 3)):
        coeffs = {j: float(rng.randint(-3, 4)) for j in range(n)}
        coeffs = {j: a for j, a in coeffs.items() if a != 0}
        if not coeffs:
            coeffs = {0: 1.0}
        rows.append(Row(f"r{k}", coeffs, rng.choice(["<=", ">="]),
                        float(rng.randint(-2, 10))))
    return FlatModel(
        sense=rng.choice(["min", "max"]),
        c=[float(rng.randint(-5, 5)) for _ in range(n)],
        variables=variables,
        rows=rows,
    )


def solve_external(model: FlatModel, tmp_path):
    lp = tmp_path / "model.lp"
    sol = tmp_path / "model.sol"
    lp.write_text(emit_lp(model))
    proc = subprocess.run(
        [sys.executable, "-m", "lpagent.tools.lpsolve", str(lp), str(sol)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    return parse_solution(sol.read_text(), model)


def test_twenty_random_models_agree(tmp_path):
    rng = random.Random(20240817)
    start = time.monotonic()
    compared = 0
    while compared < 20:
        model = random_integer_model(rng)
        oracle_sol = oracle_solve(model)
        external_sol = solve_external(model, tmp_path)
        assert oracle_sol.status == external_sol.status, emit_lp(model)
        if oracle_sol.status == "optimal":
            # integer data everywhere, so objectives must match exactly
            assert oracle_sol.objective == external_sol.objective, emit_lp(model)
            for sol in (oracle_sol, external_sol):
                result = check(model, sol.values)
                assert result.feasible and result.max_violation <= 1e-6
        compared += 1
    assert time.monotonic() - start < 60
