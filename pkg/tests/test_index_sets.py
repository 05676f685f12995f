from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from interpolab.index_sets import (
    GeneratorSpec,
    IndexSet,
    denser_than_lacunary_evidence,
    difference_set,
    generate,
    lacunary_ratio,
    longest_ap,
    polynomial,
    power,
    union,
)
from oracles import brute_longest_ap


def test_power_family():
    assert generate(power(2), 4).elements == (2, 4, 8, 16)


def test_grow_blocks():
    E = generate(GeneratorSpec("grow"), 7)
    # n=1 block has j=0,1 and n=2 block has j=1..4
    assert E.elements[:2] == (4, 6)
    assert E.elements[2:6] == (84, 90, 108, 162)
    assert E.elements[6] == 3**9 + 3**4


def test_union_merges_and_tags_branches():
    E = generate(union(power(2), power(2, 2, 0)), 6)
    assert E.elements == (2, 4, 8, 14, 16, 24)
    both = [p for e, p in zip(E, E.provenance) if e in (4, 8)]
    assert all("|" in p for p in both)
    assert "|" not in E.provenance[0]


def test_polynomial_integrality_checked():
    assert generate(polynomial(0, F(1, 2), F(1, 2)), 4).elements == (1, 3, 6, 10)
    with pytest.raises(ValueError):
        generate(polynomial(0, F(1, 2)), 3)


def test_nonmonotone_rejected():
    with pytest.raises(ValueError):
        generate(GeneratorSpec("explicit", {"elements": [3, 2]}), 2)
    with pytest.raises(ValueError):
        generate(power(2), 0)


@pytest.mark.parametrize("E, want", [((2, 4, 8, 16), F(2)), ((1, 2, 3), F(3, 2)), ((5, 6), F(6, 5))])
def test_lacunary_ratio(E, want):
    assert lacunary_ratio(IndexSet(E)) == want


def test_lacunary_ratio_singleton():
    with pytest.raises(ValueError):
        lacunary_ratio(IndexSet((3,)))


def test_difference_set_examples():
    A = generate(power(2, 2, 0), 4)
    B = generate(power(2), 4)
    assert {2, 4, 6, 8} <= set(difference_set(A, B).values)
    assert difference_set([2, 4], [2, 4]).values.elements == (2,)
    assert difference_set([5], [1, 2]).values.elements == (3, 4)


def test_difference_set_reports_truncation():
    d = difference_set(range(1, 30), [0], cap=5)
    assert d.truncated and len(d.values) == 5
    assert not difference_set([5], [1], cap=5).truncated


@pytest.mark.parametrize("E, want", [
    ((1, 2, 3, 4, 5), (5, 1, 1)),
    ((2, 4, 8, 16), (2, 2, 2)),
    ((1, 10, 100), (2, 1, 9)),
    ((7,), (1, 7, 0)),
])
def test_longest_ap(E, want):
    assert longest_ap(E) == want


def test_density_evidence():
    sq = denser_than_lacunary_evidence(IndexSet(tuple(n * n for n in range(1, 12))), 2)
    assert sq.nonincreasing_from == 3
    pw = denser_than_lacunary_evidence(generate(power(2), 10), F(3, 2))
    assert pw.strictly_increasing and pw.nonincreasing_from is None
    lin = denser_than_lacunary_evidence(IndexSet(tuple(range(1, 10))), 2)
    assert lin.nonincreasing_from == 1
    with pytest.raises(ValueError):
        denser_than_lacunary_evidence(IndexSet((1, 2)), 1)


def test_index_set_json_round_trip():
    E = generate(union(power(2), power(3)), 6)
    assert IndexSet.from_json(E.to_json()) == E
    spec = union(power(2), polynomial(1, 1))
    assert GeneratorSpec.from_json(spec.to_json()).describe() == spec.describe()


@given(st.lists(st.integers(1, 60), min_size=1, max_size=12))
def test_longest_ap_matches_brute_force(E):
    assert longest_ap(E) == brute_longest_ap(E)


@given(st.integers(2, 9), st.integers(2, 15))
def test_power_is_exactly_lacunary(q, N):
    assert lacunary_ratio(generate(power(q), N)) == q


@given(st.sets(st.integers(1, 200), min_size=2, max_size=20), st.data())
def test_difference_of_disjoint_parts_never_zero(E, data):
    els = sorted(E)
    cut = data.draw(st.integers(1, len(els) - 1))
    A, B = els[:cut], els[cut:]
    assert 0 not in difference_set(A, B).values.as_set()
    assert 0 not in difference_set(B, A).values.as_set()


@given(st.integers(1, 40))
def test_generate_deterministic(N):
    spec = union(power(2), power(2, 2, -1))
    assert generate(spec, N) == generate(spec, N)
