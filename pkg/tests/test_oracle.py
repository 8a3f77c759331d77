import itertools

import numpy as np
import pytest

from lpagent.amdl import expand, parse_amdl
from lpagent.amdl._kernels import enumerate_lattice
from lpagent.amdl.flatmodel import FlatModel, FlatVar, Row, SosGroup
from lpagent.amdl.oracle import check, oracle_solve
from lpagent.errors import OracleScopeExceeded
from lpagent.model import DataBundle


def build(snippets, data):
    return expand([(eid, parse_amdl(code)) for eid, code in snippets], data)


def test_continuous_vertex_enumeration():
    # max 3a+2b st a+2b<=4, 3a+b<=5: optimum 6.4 at (1.2, 1.4), by hand
    model = build([
        ("x", "var x{p in P} >= 0;"),
        ("obj", "maximize: 3 * x[0] + 2 * x[1];"),
        ("c1", "x[0] + 2 * x[1] <= 4;"),
        ("c2", "3 * x[0] + x[1] <= 5;"),
    ], DataBundle({"P": 2}, {}))
    sol = oracle_solve(model)
    assert sol.status == "optimal"
    assert sol.objective == pytest.approx(6.4, abs=1e-9)
    assert check(model, sol.values).feasible


def test_continuous_unbounded():
    model = build([
        ("x", "var x >= 0;"),
        ("obj", "maximize: x;"),
        ("c1", "x >= 1;"),
    ], DataBundle({}, {}))
    assert oracle_solve(model).status == "unbounded"


def test_continuous_infeasible():
    model = build([
        ("x", "var x >= 0 <= 1;"),
        ("obj", "maximize: x;"),
        ("c1", "x >= 2;"),
    ], DataBundle({}, {}))
    assert oracle_solve(model).status == "infeasible"


def test_integer_lattice_matches_brute_force():
    model = build([
        ("take", "var take{i in Items}, binary;"),
        ("obj", "maximize: sum(i in Items)(Value[i] * take[i]);"),
        ("c1", "sum(i in Items)(Weight[i] * take[i]) <= MaxWeight;"),
    ], DataBundle({"Items": 4},
                  {"Value": [10, 13, 7, 11], "Weight": [5, 6, 4, 5],
                   "MaxWeight": 10}))
    sol = oracle_solve(model)
    # independent brute force over all 16 selections
    best = max(
        sum(v * t for v, t in zip([10, 13, 7, 11], picks))
        for picks in itertools.product([0, 1], repeat=4)
        if sum(w * t for w, t in zip([5, 6, 4, 5], picks)) <= 10
    )
    assert best == 21
    assert sol.status == "optimal" and sol.objective == best


def test_mixed_model_out_of_scope():
    model = FlatModel(sense="min", c=[1.0, 1.0], variables=[
        FlatVar("x", 0, 1, "continuous"),
        FlatVar("n", 0, 5, "integer"),
    ])
    with pytest.raises(OracleScopeExceeded):
        oracle_solve(model)


def test_lattice_size_cap():
    model = FlatModel(sense="min", c=[1.0], variables=[
        FlatVar("n", 0, 10**7, "integer"),
    ])
    with pytest.raises(OracleScopeExceeded):
        oracle_solve(model)


def test_continuous_dimension_cap():
    model = FlatModel(sense="min", c=[1.0] * 4, variables=[
        FlatVar(f"x{i}", 0, 1, "continuous") for i in range(4)
    ])
    with pytest.raises(OracleScopeExceeded):
        oracle_solve(model)


def test_check_reports_violation():
    model = build([
        ("x", "var x >= 0 <= 10;"),
        ("obj", "maximize: x;"),
        ("c1", "x <= 3;"),
    ], DataBundle({}, {}))
    good = check(model, {"x": 3.0})
    bad = check(model, {"x": 5.0})
    assert good.feasible and good.max_violation <= 1e-9
    assert not bad.feasible and bad.max_violation == pytest.approx(2.0)


def test_check_integrality_and_bounds():
    model = FlatModel(sense="min", c=[1.0], variables=[
        FlatVar("n", 0, 5, "integer"),
    ])
    assert check(model, {"n": 2.0}).feasible
    assert not check(model, {"n": 2.5}).feasible
    assert not check(model, {"n": 9.0}).feasible


def test_sos1_enumeration():
    # max x0+x1 with both <= 3 but at most one nonzero
    model = FlatModel(sense="max", c=[1.0, 1.0], variables=[
        FlatVar("x_0", 0, 3, "integer"),
        FlatVar("x_1", 0, 3, "integer"),
    ], sos_groups=[SosGroup(kind="sos1", var_indices=[0, 1])])
    sol = oracle_solve(model)
    assert sol.objective == 3.0
    assert sorted(sol.values.values()) == [0.0, 3.0]


def _lattice_both_paths(model):
    from lpagent.amdl.oracle import _dense_rows

    n = len(model.variables)
    lo = np.array([int(v.lb) for v in model.variables], dtype=np.int64)
    sizes = np.array([int(v.ub - v.lb) + 1 for v in model.variables],
                     dtype=np.int64)
    A, senses, b = _dense_rows(model, n)
    empty_i = np.zeros(0, dtype=np.int64)
    empty_f = np.zeros(0)
    empty_s = np.zeros(0, dtype=np.int8)
    args = (lo, sizes, A, senses, b, empty_i, empty_f, np.zeros((0, n)),
            empty_s, empty_f, np.array(model.c), model.sense == "max")
    return (enumerate_lattice(*args, force_numpy=False),
            enumerate_lattice(*args, force_numpy=True))


def test_numba_and_numpy_paths_agree():
    rng = np.random.default_rng(7)
    for _ in range(10):
        n = int(rng.integers(1, 4))
        ubs = rng.integers(1, 6, size=n)
        model = FlatModel(
            sense="max",
            c=list(rng.integers(-5, 6, size=n).astype(float)),
            variables=[FlatVar(f"v{i}", 0, int(ubs[i]), "integer")
                       for i in range(n)],
            rows=[Row("r0", {i: float(rng.integers(-3, 4)) for i in range(n)},
                      "<=", float(rng.integers(0, 12)))],
        )
        (found_a, obj_a, x_a), (found_b, obj_b, x_b) = _lattice_both_paths(model)
        assert found_a == found_b
        if found_a:
            assert obj_a == obj_b
            assert list(x_a) == list(x_b)
