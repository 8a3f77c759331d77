import pytest

from lpagent.amdl.flatmodel import FlatModel, FlatVar
from lpagent.amdl.solution import parse_solution
from lpagent.errors import UnknownVariableName, UnparseableSolution


def model():
    return FlatModel(sense="max", c=[1.0, 1.0], variables=[
        FlatVar("x_0", 0, 10, "continuous"),
        FlatVar("x_1", 0, 10, "continuous"),
    ])


def test_dialect_a_optimal():
    sol = parse_solution("Optimal\nobj 6.4\nx_0 1.2\nx_1 1.4\n", model())
    assert sol.status == "optimal"
    assert sol.objective == 6.4
    assert sol.values == {"x_0": 1.2, "x_1": 1.4}


def test_dialect_a_omitted_zeros():
    sol = parse_solution("Optimal\nobj 5\nx_0 5\n", model())
    assert sol.values["x_1"] == 0.0


def test_dialect_a_statuses():
    assert parse_solution("Infeasible\n", model()).status == "infeasible"
    assert parse_solution("Unbounded\n", model()).status == "unbounded"


def test_dialect_b():
    text = "Status: Optimal\nObjective: 6.4\nx_0 1.2\nx_1 1.4\n"
    sol = parse_solution(text, model(), dialect="B")
    assert sol.status == "optimal" and sol.objective == 6.4


def test_unknown_variable_rejected():
    with pytest.raises(UnknownVariableName):
        parse_solution("Optimal\nobj 1\nbogus 1\n", model())


def test_unparseable():
    with pytest.raises(UnparseableSolution):
        parse_solution("", model())
    with pytest.raises(UnparseableSolution):
        parse_solution("Optimal\nobj\n", model())
    with pytest.raises(UnparseableSolution):
        parse_solution("What\n", model())
