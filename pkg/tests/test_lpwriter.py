import pytest

from conftest import FIXTURES
from lpagent.amdl import emit_lp, expand, parse_amdl
from lpagent.amdl.flatmodel import FlatModel, FlatVar
from lpagent.errors import UnrepresentableStructure
from lpagent.model import DataBundle

GOLDENS = {
    "furniture": ([
        ("make", "var make{p in Products} >= 0;"),
        ("obj", "maximize: sum(p in Products)(Profit[p] * make[p]);"),
        ("c1", "forall(m in Machines): sum(p in Products)"
               "(Hours[m, p] * make[p]) <= Capacity[m];"),
        ("c2", "forall(p in Products): make[p] >= 0;"),
    ], DataBundle({"Products": 2, "Machines": 2},
                  {"Profit": [3, 2], "Hours": [[1, 2], [3, 1]],
                   "Capacity": [4, 5]})),
    "knapsack": ([
        ("take", "var take{i in Items}, binary;"),
        ("obj", "maximize: sum(i in Items)(Value[i] * take[i]);"),
        ("c1", "sum(i in Items)(Weight[i] * take[i]) <= MaxWeight;"),
    ], DataBundle({"Items": 4},
                  {"Value": [10, 13, 7, 11], "Weight": [5, 6, 4, 5],
                   "MaxWeight": 10})),
    "features": ([
        ("x", "var x{i in I} >= 0 <= 5, integer;"),
        ("b", "var b, binary;"),
        ("y", "var y >= -2 <= 2;"),
        ("obj", "minimize: 2 * y + sum(i in I)(x[i]) + 7;"),
        ("c1", "indicator(b = 1): y + x[0] <= 3;"),
        ("c2", "sos1: x[0], x[1];"),
        ("c3", "forall(i in I): x[i] - y >= 0;"),
    ], DataBundle({"I": 2}, {})),
}


@pytest.mark.parametrize("name", sorted(GOLDENS))
def test_golden_byte_exact(name):
    snippets, data = GOLDENS[name]
    model = expand([(eid, parse_amdl(code)) for eid, code in snippets], data)
    golden = (FIXTURES / "lp" / f"{name}.lp").read_text()
    assert emit_lp(model) == golden


def test_emit_is_deterministic():
    snippets, data = GOLDENS["features"]
    stmts = [(eid, parse_amdl(code)) for eid, code in snippets]
    assert emit_lp(expand(stmts, data)) == emit_lp(expand(stmts, data))


def test_empty_model_rejected():
    with pytest.raises(UnrepresentableStructure):
        emit_lp(FlatModel())


def test_invariant_violation_rejected():
    model = FlatModel(sense="min", c=[1.0, 2.0],
                      variables=[FlatVar("x", 0, 1, "continuous")])
    with pytest.raises(UnrepresentableStructure):
        emit_lp(model)  # objective length does not match variables
