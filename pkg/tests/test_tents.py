from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from interpolab import _tents
from oracles import circle_norm, grid_supmin

diff_sets = st.sets(st.integers(1, 20), min_size=1, max_size=6)


def test_tent_min_matches_definition():
    D = [3, 5, 7]
    for x in (F(0), F(1, 7), F(2, 9), F(1, 2)):
        assert _tents.tent_min(D, x) == min(circle_norm(m * x) for m in D)


@pytest.mark.parametrize("D, value, arg", [
    ([1], F(1, 2), F(1, 2)),
    ([1, 2], F(1, 3), F(1, 3)),
    ([2, 3], F(2, 5), F(1, 5)),
    ([1, 2, 3], F(1, 4), F(1, 4)),
])
def test_small_supmins(D, value, arg):
    assert _tents.supmin(D) == (value, arg)


def test_bnb_budget():
    with pytest.raises(_tents.BudgetExceeded):
        _tents.supmin_bnb([997, 1009, 3001, 5003, 7919], max_nodes=3)


def test_large_lacunary_set_is_fast():
    D = [2**k for k in range(1, 41)]
    value, x = _tents.supmin(D)
    assert _tents.tent_min(D, x) == value
    # multiplying by 2 maps the set into itself, which caps the value at 1/3
    assert value <= F(1, 3)


@given(diff_sets)
def test_supmin_matches_grid_oracle(D):
    assert _tents.supmin(D) == grid_supmin(D)


@settings(max_examples=60)
@given(st.sets(st.integers(1, 400), min_size=1, max_size=8))
def test_bnb_agrees_with_enumeration(D):
    assert _tents.supmin_bnb(D) == _tents.supmin_enumerate(D)


@given(diff_sets, st.fractions(0, F(1, 2), max_denominator=200))
def test_supmin_is_an_upper_bound(D, x):
    value, _ = _tents.supmin(D)
    assert _tents.tent_min(D, x) <= value
