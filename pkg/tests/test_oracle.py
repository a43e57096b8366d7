"""Cross-checks between the matching-based engine and the enumeration oracle."""

import pytest
from hypothesis import given, strategies as st

from causal_loom.core import Equation, build_system
from causal_loom.errors import ModelError
from causal_loom.oracle import brute_force_classify, brute_force_ordering
from causal_loom.ordering import SystemClass, causal_ordering, classify

from gensys import random_non_over_constrained, random_system


def test_oracle_sfr_identical(sfr_system):
    assert brute_force_ordering(sfr_system) == causal_ordering(sfr_system)


def test_oracle_extended_identical(extended_system):
    assert brute_force_ordering(extended_system) == causal_ordering(extended_system)


def test_oracle_single_equation():
    system = build_system([Equation("fa", ("X",))])
    result = brute_force_ordering(system)
    assert dict(result.graph.solve_order) == {"X": 0}
    assert not result.graph.arcs
    assert result == causal_ordering(system)


def test_oracle_size_limit():
    equations = [Equation(f"e{i:02d}", (f"v{i}",)) for i in range(13)]
    system = build_system(equations)
    with pytest.raises(ModelError, match="limited"):
        brute_force_ordering(system)


non_over = st.builds(
    random_non_over_constrained, st.randoms(use_true_random=False), st.just(8)
)
anything = st.builds(random_system, st.randoms(use_true_random=False), st.just(7))


@given(non_over)
def test_oracle_equivalence(system):
    assert brute_force_ordering(system) == causal_ordering(system)


@given(anything)
def test_hall_equivalence(system):
    assert brute_force_classify(system) is classify(system)


@given(anything)
def test_full_class_agreement(system):
    expected = brute_force_classify(system)
    assert classify(system) is expected
    if expected is not SystemClass.OVER_CONSTRAINED:
        assert brute_force_ordering(system) == causal_ordering(system)
