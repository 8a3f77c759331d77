"""Cross-backend checks against the script runner (optional component).

Each dual-target fixture carries the same model twice: AMDL snippets for the
LP backend and Python snippets for the runner. The whole module is skipped
when the runner has not been built.
"""

import random
import time
from pathlib import Path

import pytest

from lpagent.execution import ExecutionJob, Limits, execute_lp, execute_script
from lpagent.model import DataBundle

RUNNER_JS = Path(__file__).resolve().parent.parent / "runner" / "dist" / "runner.js"
if not RUNNER_JS.exists():
    pytest.skip(
        "script runner not built (run `npm install && npm run build` in runner/)",
        allow_module_level=True,
    )

RUNNER_CMD = f"node {RUNNER_JS}"


# (data, amdl snippets, script snippets) triples describing the same model
DUAL_FIXTURES = {
    "furniture_lp": (
        DataBundle(
            {"M": 2, "P": 2},
            {"Profit": [2.0, 1.2], "Hours": [[1.0, 2.0], [2.0, 1.0]],
             "Capacity": [8.0, 8.0]},
        ),
        {"make": "var make{p in P} >= 0;"},
        {"obj": "maximize: sum(p in P)(Profit[p] * make[p]);",
         "c1": "forall(m in M): sum(p in P)(Hours[m, p] * make[p]) <= Capacity[m];"},
        {"make": 'make = [Var(f"make_{p}") for p in range(P)]'},
        {"obj": "model.maximize(sum(Profit[p] * make[p] for p in range(P)))",
         "c1": "\n".join([
             "for m in range(M):",
             "    model.add(sum(Hours[m][p] * make[p] for p in range(P))"
             " <= Capacity[m])",
         ])},
    ),
    "knapsack_binary": (
        DataBundle({"I": 4},
                   {"Value": [6.0, 10.0, 12.0, 5.0], "Weight": [1.0, 2.0, 3.0, 2.0],
                    "Cap": 5.0}),
        {"take": "var take{i in I}, binary;"},
        {"obj": "maximize: sum(i in I)(Value[i] * take[i]);",
         "c1": "sum(i in I)(Weight[i] * take[i]) <= Cap;"},
        {"take": 'take = [Var(f"take_{i}", binary=True) for i in range(I)]'},
        {"obj": "model.maximize(sum(Value[i] * take[i] for i in range(I)))",
         "c1": "model.add(sum(Weight[i] * take[i] for i in range(I)) <= Cap)"},
    ),
    "integer_production": (
        DataBundle({}, {"Cap": 7.0}),
        {"units": "var units >= 0 <= 100, integer;"},
        {"obj": "maximize: 3 * units;", "c1": "2 * units <= Cap;"},
        {"units": 'units = Var("units", ub=100, integer=True)'},
        {"obj": "model.maximize(3 * units)", "c1": "model.add(2 * units <= Cap)"},
    ),
    "infeasible": (
        DataBundle({}, {}),
        {"x": "var x >= 0 <= 2;"},
        {"obj": "minimize: x;", "c1": "x >= 5;"},
        {"x": 'x = Var("x", ub=2)'},
        {"obj": "model.minimize(x)", "c1": "model.add(x >= 5)"},
    ),
    "unbounded": (
        DataBundle({}, {}),
        {"x": "var x >= 0;"},
        {"obj": "maximize: x;"},
        {"x": 'x = Var("x")'},
        {"obj": "model.maximize(x)"},
    ),
}


def amdl_job(name) -> ExecutionJob:
    data, var_amdl, clause_amdl, _, _ = DUAL_FIXTURES[name]
    return ExecutionJob(data=data, variable_snippets=var_amdl,
                        clause_snippets=clause_amdl)


def script_job(name, limits=None) -> ExecutionJob:
    data, _, _, var_py, clause_py = DUAL_FIXTURES[name]
    return ExecutionJob(data=data, variable_snippets=var_py,
                        clause_snippets=clause_py, code_target="script",
                        limits=limits or Limits())


@pytest.mark.parametrize("name", sorted(DUAL_FIXTURES))
def test_backends_agree(name):
    lp = execute_lp(amdl_job(name))
    script = execute_script(script_job(name), RUNNER_CMD)
    assert script.status == lp.status
    if lp.status == "optimal":
        rel = abs(script.objective - lp.objective) / max(1.0, abs(lp.objective))
        assert rel <= 1e-6


def test_fault_injection_attribution():
    """A raising snippet in a random region is always attributed to it."""
    rng = random.Random(50)
    base = script_job("furniture_lp")
    entities = list(base.variable_snippets) + list(base.clause_snippets)
    for trial in range(50):
        target = rng.choice(entities)
        variables = dict(base.variable_snippets)
        clauses = dict(base.clause_snippets)
        fault = f"raise RuntimeError('injected fault {trial}')"
        if target in variables:
            variables[target] = variables[target] + "\n" + fault
        else:
            clauses[target] = clauses[target] + "\n" + fault
        job = ExecutionJob(data=base.data, variable_snippets=variables,
                           clause_snippets=clauses, code_target="script")
        result = execute_script(job, RUNNER_CMD)
        assert result.status == "error", target
        assert result.error["entity_id"] == target
        assert f"injected fault {trial}" in result.error["detail"]


def test_timeout_respects_limit():
    job = script_job("furniture_lp", limits=Limits(wall_seconds=2.0))
    job.clause_snippets = dict(job.clause_snippets)
    job.clause_snippets["c1"] = "while True:\n    pass"
    start = time.monotonic()
    result = execute_script(job, RUNNER_CMD)
    assert result.status == "timeout"
    assert time.monotonic() - start < 4.0
