import random

import pytest
from hypothesis import given, strategies as st

from causal_loom.core import (
    Equation,
    EquationKind,
    ExplicitForm,
    Manipulativity,
    StructuralSystem,
    SubsetCounts,
    VariableAttributes,
    build_system,
    merge_variables,
    remove_equation,
    rename_variable,
    structure_matrix,
    subset_counts,
    unused_suffix_name,
)
from causal_loom.errors import ModelError
from causal_loom.expr import BinOp, Var
from causal_loom.ordering import SystemClass, classify

from gensys import random_non_over_constrained, random_system


def eq(eq_id, *participants):
    return Equation(eq_id, tuple(participants))


def test_build_sfr_counts(sfr_system):
    assert sfr_system.m == 3
    assert sfr_system.n == 3
    assert sfr_system.variables == ("NF", "NS", "SFR")


def test_build_empty_rejected():
    with pytest.raises(ModelError):
        build_system([])


def test_build_extended_counts(extended_system):
    assert extended_system.m == 5
    assert extended_system.n == 6


def test_build_duplicate_id_rejected():
    with pytest.raises(ModelError, match="duplicate equation id"):
        build_system([eq("f1", "X"), eq("f1", "Y")])


def test_build_empty_participants_rejected():
    with pytest.raises(ModelError):
        build_system([Equation("f1", ())])


def test_build_isolated_declared_variable_rejected():
    with pytest.raises(ModelError, match="participates in no equation"):
        build_system([eq("f1", "X")], {"Y": VariableAttributes()})


def test_build_defaults_for_undeclared():
    system = build_system([eq("f1", "X", "Y")])
    assert system.attributes["X"] == VariableAttributes()
    assert system.attributes["X"].manipulativity is Manipulativity.MANIPULATABLE


def test_variable_name_validation():
    with pytest.raises(ModelError):
        eq("f1", "1bad")
    with pytest.raises(ModelError):
        eq("f1", "a-b")
    with pytest.raises(ModelError):
        eq("f 1", "X")


def test_value_assignment_shape_enforced():
    with pytest.raises(ModelError):
        Equation("f1", ("X", "Y"), kind=EquationKind.VALUE_ASSIGNMENT)
    with pytest.raises(ModelError):
        Equation("f1", ("X",), kind=EquationKind.VALUE_ASSIGNMENT)  # no form


def test_explicit_form_participants_normalized():
    form = ExplicitForm("Z", BinOp("/", Var("A"), Var("B")))
    equation = Equation("f1", ("B", "A", "Z"), explicit_form=form)
    assert equation.participants == ("Z", "A", "B")


def test_explicit_form_mismatch_rejected():
    form = ExplicitForm("Z", Var("A"))
    with pytest.raises(ModelError):
        Equation("f1", ("Z", "A", "B"), explicit_form=form)


def test_subset_counts_examples(sfr_system, extended_system):
    assert subset_counts(sfr_system, {"f1", "f2"}) == SubsetCounts(ne=2, nv=2)
    assert subset_counts(sfr_system, set()) == SubsetCounts(ne=0, nv=0)
    assert subset_counts(extended_system, {"f7"}) == SubsetCounts(ne=1, nv=5)


def test_subset_counts_unknown_id(sfr_system):
    with pytest.raises(ModelError, match="unknown equation"):
        subset_counts(sfr_system, {"f99"})


def test_rename_participation_only():
    system = build_system([eq("f10", "FS", "OI", "TA", "O", "NS", "NF")])
    renamed = rename_variable(system, "NS", "NS0")
    assert renamed.equation("f10").participants == ("FS", "OI", "TA", "O", "NS0", "NF")


def test_rename_self_collision():
    system = build_system([eq("f1", "X")])
    with pytest.raises(ModelError, match="already in use"):
        rename_variable(system, "X", "X")


def test_rename_rewrites_explicit_form(sfr_system):
    renamed = rename_variable(sfr_system, "NS", "NS0")
    form = renamed.equation("f3").explicit_form
    assert form is not None
    assert form.rhs == BinOp("/", Var("NS0"), Var("NF"))


def test_rename_carries_attributes():
    attrs = VariableAttributes(manipulativity=Manipulativity.TRULY_EXOGENOUS)
    system = build_system([eq("f1", "X")], {"X": attrs})
    renamed = rename_variable(system, "X", "Y")
    assert renamed.attributes["Y"] == attrs


def test_merge_session_example():
    system = build_system(
        [eq("f7", "NS", "NF", "CS", "CL", "TL"), eq("f10", "FS", "OI", "TA", "O", "NS0", "NF0")]
    )
    merged = merge_variables(system, "NS0", "NS")
    merged = merge_variables(merged, "NF0", "NF")
    assert merged.equation("f10").participants == ("FS", "OI", "TA", "O", "NS", "NF")
    assert merged.n == system.n - 2


def test_merge_self_rejected():
    system = build_system([eq("f1", "X")])
    with pytest.raises(ModelError, match="itself"):
        merge_variables(system, "X", "X")


def test_merge_can_over_constrain_downstream():
    system = build_system([eq("fa", "X", "Y"), eq("fb", "Y")])
    merged = merge_variables(system, "X", "Y")
    assert merged.equation("fa").participants == ("Y",)
    assert merged.n == 1
    assert classify(merged) is SystemClass.OVER_CONSTRAINED


def test_merge_keeps_target_attributes():
    keep = VariableAttributes(observation_cost=7)
    drop = VariableAttributes(manipulation_cost=3)
    system = build_system([eq("fa", "X", "Y")], {"X": drop, "Y": keep})
    merged = merge_variables(system, "X", "Y")
    assert merged.attributes["Y"] == keep
    assert "X" not in merged.attributes


def test_remove_equation_drops_orphaned_variables(sfr_system):
    reduced = remove_equation(sfr_system, "f3")
    assert "SFR" not in reduced.attributes
    assert reduced.m == 2


def test_structure_matrix_round_trip(sfr_system):
    eq_ids, var_names, rows = structure_matrix(sfr_system)
    assert eq_ids == ("f1", "f2", "f3")
    assert var_names == ("NF", "NS", "SFR")
    incidence = {
        (eq_ids[i], var_names[j]): rows[i][j]
        for i in range(len(eq_ids))
        for j in range(len(var_names))
    }
    for equation in sfr_system.equations:
        for name in var_names:
            assert incidence[(equation.id, name)] == (name in equation.participant_set)


def test_unused_suffix_name():
    assert unused_suffix_name("NS", {"NS"}) == "NS0"
    assert unused_suffix_name("NS", {"NS", "NS0"}) == "NS1"
    assert unused_suffix_name("NS", {"NS", "NS0", "NS1", "NS2"}) == "NS3"


# --- property tests ---------------------------------------------------------

systems = st.builds(
    random_non_over_constrained, st.randoms(use_true_random=False), st.just(8)
)
any_systems = st.builds(random_system, st.randoms(use_true_random=False), st.just(6))


@given(any_systems)
def test_structure_matrix_matches_participation(system: StructuralSystem):
    eq_ids, var_names, rows = structure_matrix(system)
    for i, eq_id in enumerate(eq_ids):
        participants = system.equation(eq_id).participant_set
        assert {var_names[j] for j, marked in enumerate(rows[i]) if marked} == participants


@given(any_systems)
def test_rename_then_reverse_is_identity(system: StructuralSystem):
    name = system.variables[0]
    there = rename_variable(system, name, "tmp_renamed")
    back = rename_variable(there, "tmp_renamed", name)
    assert back == system


@given(any_systems, st.randoms(use_true_random=False))
def test_merge_never_increases_nv_and_keeps_ne(system: StructuralSystem, rng: random.Random):
    if system.n < 2:
        return
    source, target = rng.sample(system.variables, 2)
    merged = merge_variables(system, source, target)
    ids = list(system.equation_ids)
    for _ in range(5):
        chosen = frozenset(rng.sample(ids, rng.randint(0, len(ids))))
        before = subset_counts(system, chosen)
        after = subset_counts(merged, chosen)
        assert after.ne == before.ne
        assert after.nv <= before.nv


@given(any_systems, st.randoms(use_true_random=False))
def test_subset_counts_monotone(system: StructuralSystem, rng: random.Random):
    ids = list(system.equation_ids)
    small = frozenset(rng.sample(ids, rng.randint(0, len(ids))))
    grow = set(small)
    for extra in rng.sample(ids, rng.randint(0, len(ids))):
        grow.add(extra)
    assert subset_counts(system, small).nv <= subset_counts(system, frozenset(grow)).nv
