import math

import pytest

from lpagent.amdl import expand, parse_amdl
from lpagent.amdl.expand import flat_name
from lpagent.errors import (
    IndexOutOfRange,
    NonlinearTerm,
    UnboundDimension,
    UnknownSymbol,
)
from lpagent.model import DataBundle


def build(snippets, data):
    return expand([(eid, parse_amdl(code)) for eid, code in snippets], data)


DATA = DataBundle({"P": 2, "M": 2},
                  {"c": [3, 2], "A": [[1, 2], [3, 1]], "b": [4, 5], "k": 7})


def test_flat_names():
    assert flat_name("x", []) == "x"
    assert flat_name("x", [0]) == "x_0"
    assert flat_name("x", [1, 2]) == "x_1_2"


def test_expansion_shapes_and_defaults():
    model = build([
        ("x", "var x{p in P} >= 0;"),
        ("n", "var n{p in P}, integer;"),
        ("b1", "var b1, binary;"),
        ("obj", "minimize: sum(p in P)(c[p] * x[p]);"),
    ], DATA)
    names = [v.name for v in model.variables]
    assert names == ["x_0", "x_1", "n_0", "n_1", "b1"]
    by_name = {v.name: v for v in model.variables}
    assert by_name["x_0"].lb == 0 and math.isinf(by_name["x_0"].ub)
    assert by_name["n_0"].ub == 1e9  # integer default bounds
    assert (by_name["b1"].lb, by_name["b1"].ub) == (0, 1)


def test_rows_carry_clause_ids():
    model = build([
        ("x", "var x{p in P} >= 0;"),
        ("obj", "maximize: sum(p in P)(c[p] * x[p]);"),
        ("c1", "forall(m in M): sum(p in P)(A[m, p] * x[p]) <= b[m];"),
    ], DATA)
    assert [r.name for r in model.rows] == ["c1_0", "c1_1"]
    assert all(r.clause_id == "c1" for r in model.rows)
    assert model.sense == "max"
    assert model.c == [3, 2]


def test_constant_folding_and_offset():
    model = build([
        ("x", "var x >= 0;"),
        ("obj", "minimize: 2 * x + 7;"),
        ("c1", "x + 1 <= k;"),
    ], DATA)
    assert model.objective_offset == 7
    assert model.rows[0].rhs == 6  # constant moved to the rhs


def test_unknown_symbol_attributed():
    with pytest.raises(UnknownSymbol) as exc:
        build([
            ("x", "var x >= 0;"),
            ("obj", "minimize: x;"),
            ("c1", "x <= Missing;"),
        ], DATA)
    assert exc.value.entity_id == "c1"


def test_index_out_of_range():
    with pytest.raises(IndexOutOfRange):
        build([
            ("x", "var x{p in P} >= 0;"),
            ("obj", "minimize: x[5];"),
        ], DATA)


def test_unbound_dimension():
    with pytest.raises(UnboundDimension):
        build([("x", "var x{q in Q} >= 0;"), ("obj", "minimize: x[0];")], DATA)


def test_nonlinear_at_expand():
    with pytest.raises(NonlinearTerm):
        build([
            ("x", "var x >= 0;"),
            ("y", "var y >= 0;"),
            ("obj", "minimize: x * y;"),
        ], DATA)


def test_zero_coefficients_dropped():
    data = DataBundle({"P": 2}, {"w": [0, 4]})
    model = build([
        ("x", "var x{p in P} >= 0;"),
        ("obj", "minimize: x[0];"),
        ("c1", "sum(p in P)(w[p] * x[p]) <= 8;"),
    ], data)
    assert model.rows[0].coeffs == {1: 4.0}


def test_indicator_requires_binary():
    from lpagent.errors import UnrepresentableStructure
    with pytest.raises(UnrepresentableStructure):
        build([
            ("x", "var x >= 0;"),
            ("obj", "minimize: x;"),
            ("c1", "indicator(x = 1): x <= 3;"),
        ], DATA)
