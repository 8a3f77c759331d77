import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lpagent.errors import (
    DuplicateObjective,
    DuplicateSymbol,
    MalformedSymbol,
    UnknownClause,
    UnknownSymbol,
)
from lpagent.model import Clause, Parameter, StructuredProblem, Variable

from conftest import factory_problem


def test_duplicate_symbol_rejected():
    p = factory_problem()
    with pytest.raises(DuplicateSymbol):
        p.add_entity(Variable("Profit", [], "continuous", "clash with parameter"))
    with pytest.raises(DuplicateSymbol):
        p.add_entity(Parameter("make", [], "clash with variable"))


def test_single_objective_enforced():
    p = factory_problem()
    with pytest.raises(DuplicateObjective):
        p.add_entity(Clause(id="obj2", kind="objective", description="again"))


def test_malformed_symbol_rejected():
    p = StructuredProblem(background="")
    with pytest.raises(MalformedSymbol):
        p.add_entity(Parameter("2bad", [], ""))


def test_connect_unknowns():
    p = factory_problem()
    with pytest.raises(UnknownClause):
        p.connect("c99", "Profit")
    with pytest.raises(UnknownSymbol):
        p.connect("c1", "Nothing")


def test_remove_clause_drops_edges():
    p = factory_problem()
    p.remove_clause("c1")
    assert "c1" not in p.clauses
    assert not {e for e in p.graph.clause_param_edges if e[0] == "c1"}
    assert not {e for e in p.graph.clause_var_edges if e[0] == "c1"}


def test_remove_symbol_drops_edges():
    p = factory_problem()
    p.remove_symbol("make")
    assert "make" not in p.variables
    assert not {e for e in p.graph.clause_var_edges if e[1] == "make"}


def test_clause_ids_objective_first():
    p = factory_problem()
    p.add_entity(Clause(id="c2", kind="constraint", description="more"))
    assert p.clause_ids()[0] == "obj"
    assert p.clause_ids() == ["obj", "c1", "c2"]


def test_validate_clean_fixture():
    assert factory_problem().validate() == []


def test_validate_flags_unlinked_symbol():
    p = factory_problem()
    c = p.clauses["c1"]
    c.formulation = "sum of Hours * make <= Capacity plus Profit"
    c.set_status("formulated")
    rules = {v.rule for v in p.validate()}
    assert "unlinked_symbol" in rules  # Profit appears but is not linked


def test_validate_flags_missing_formulation():
    p = factory_problem()
    c = p.clauses["c1"]
    c.formulation = "x"
    c.set_status("formulated")
    c.formulation = ""
    assert any(v.rule == "formulation_required" for v in p.validate())


# -- property tests ---------------------------------------------------------

_ids = st.sampled_from([f"e{i}" for i in range(8)])


@st.composite
def _ops(draw):
    kind = draw(st.sampled_from(["param", "var", "clause", "remove", "connect"]))
    return kind, draw(_ids)


@settings(max_examples=1000, deadline=None)
@given(st.lists(_ops(), max_size=12))
def test_random_op_sequences_keep_invariants(ops):
    """Any op sequence leaves symbols unique and edges pointing at live entities."""
    p = StructuredProblem(background="fuzz")
    p.add_entity(Clause(id="obj", kind="objective", description="o"))
    for kind, name in ops:
        try:
            if kind == "param":
                p.add_entity(Parameter(name, [], "d"))
            elif kind == "var":
                p.add_entity(Variable(name, [], "continuous", "d"))
            elif kind == "clause":
                p.add_entity(Clause(id=name, kind="constraint", description="d"))
            elif kind == "remove":
                if name in p.clauses:
                    p.remove_clause(name)
                else:
                    p.remove_symbol(name)
            else:
                p.connect(name, name)
        except Exception:
            pass  # rejected ops must not corrupt state
        symbols = list(p.parameters) + list(p.variables)
        assert len(symbols) == len(set(symbols))
        for cid, sym in p.graph.clause_param_edges:
            assert cid in p.clauses and sym in p.parameters
        for cid, sym in p.graph.clause_var_edges:
            assert cid in p.clauses and sym in p.variables


@settings(max_examples=200, deadline=None)
@given(st.sets(st.sampled_from(["Profit", "Hours", "Capacity", "make"])))
def test_replace_edges_is_exact(symbols):
    p = factory_problem()
    p.replace_edges("c1", sorted(symbols))
    assert p.graph.symbols_of("c1") == symbols
