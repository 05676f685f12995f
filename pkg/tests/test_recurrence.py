import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from interpolab import _tents
from interpolab.exact_arith import CircleInterval, torus_reduce
from interpolab.index_sets import GeneratorSpec, IndexSet, generate, power
from interpolab.recurrence import (
    NotReached,
    PartitionTrace,
    SupMinResult,
    Threshold,
    doubling_orbit,
    orbit_csv,
    partition_bohr,
    recurrence_threshold,
    supmin_1d,
    supmin_lower_bound,
    truncated_alpha,
    weyl_sum,
)
from oracles import alpha_prefix, binary_digits, grid_supmin

EVENS = IndexSet(tuple(range(2, 10_001, 2)))


def test_supmin_1d_examples():
    r = supmin_1d([1])
    assert (r.value, r.argmax.coords) == (F(1, 2), (F(1, 2),))
    r = supmin_1d([1, 2])
    assert (r.value, r.argmax.coords) == (F(1, 3), (F(1, 3),))
    assert grid_supmin([1, 2]) == (F(1, 3), F(1, 3))


@pytest.mark.parametrize("k", range(1, 6))
@pytest.mark.parametrize("m", range(1, 6))
def test_supmin_scaling_invariance(k, m):
    assert supmin_1d([k * i for i in range(1, m + 1)]).value == supmin_1d(range(1, m + 1)).value


def test_supmin_json_round_trip():
    r = supmin_1d([3, 5, 11])
    assert SupMinResult.from_json(r.to_json()) == r


def test_supmin_lower_bound_is_sound_in_one_dim():
    R = [2, 3, 7]
    lb = supmin_lower_bound(R, d=1, samples=300, seed=1)
    assert not lb.exact and lb.value <= supmin_1d(R).value


def test_threshold_for_even_numbers():
    t = recurrence_threshold(EVENS, F(1, 10))
    assert isinstance(t, Threshold)
    assert (t.N, t.prefix_len) == (20, 10)
    assert t.certificate.value == F(1, 11) and t.certificate.argmax.coords == (F(1, 22),)
    assert supmin_1d(EVENS.upto(18)).value >= F(1, 10)


def test_threshold_lacunary_not_reached():
    res = recurrence_threshold(generate(power(2), 30), F(1, 5))
    assert isinstance(res, NotReached)
    assert res.final_sup.value >= F(1, 5)


def test_threshold_boundary_convention():
    assert isinstance(recurrence_threshold([1], F(1, 2)), NotReached)
    t = recurrence_threshold([1, 2, 3], F(3, 4))
    assert isinstance(t, Threshold) and t.N == 1
    with pytest.raises(ValueError):
        recurrence_threshold([1], F(0))


def test_partition_of_even_numbers():
    trace = partition_bohr(EVENS, [1, F(1, 2), F(1, 3)])
    assert trace.completed and trace.check()
    got = [(s.A.elements, s.B.elements) for s in trace.stages]
    assert got[0] == ((2,), (4,))
    assert got[1] == ((6, 8), (10, 12))
    assert got[2] == (tuple(range(14, 31, 2)), tuple(range(32, 67, 2)))
    assert trace.A and trace.B


def test_partition_ap_blocks():
    R = generate(GeneratorSpec("ap_blocks"), 40)
    trace = partition_bohr(R, [F(1, 2), F(1, 3)])
    assert trace.completed and trace.check()


def test_partition_lacunary_stops_at_first_stage():
    trace = partition_bohr(generate(power(2), 20), [F(1, 5)])
    assert trace.stopped_at == 0 and not trace.stages and trace.check()


def test_partition_rejects_empty_schedule():
    with pytest.raises(ValueError):
        partition_bohr(EVENS, [])


def test_tampered_trace_fails_check():
    trace = partition_bohr(EVENS.prefix(100), [1, F(1, 2)])
    s = trace.stages[0]
    bad_stage = type(s)(s.epsilon, s.A, s.B, s.N_A, s.N_B,
                        SupMinResult(s.cert_A.value / 2, s.cert_A.argmax), s.cert_B)
    bad = PartitionTrace(trace.R, trace.schedule, (bad_stage,) + trace.stages[1:], trace.residual, None)
    assert not bad.check()


def test_doubling_orbit_examples():
    rows = doubling_orbit(64)
    assert len(rows) == 65 and all(v == "outside" for _, _, v in rows)
    n0 = rows[0][1]
    assert F(9, 16) <= n0.value < F(10, 16)
    n3 = rows[3][1]
    assert F(1, 2) <= n3.value < F(9, 16)


def test_doubling_orbit_matches_naive_digits():
    digits = 64 * 64 + 64
    alpha = alpha_prefix(digits + 64)
    for n, orb, _ in doubling_orbit(64):
        true = torus_reduce(alpha * 2**n)
        assert orb.value <= true < orb.value + orb.error
        assert binary_digits(true, 16) == binary_digits(orb.value, 16)
        assert binary_digits(true, 2) != [1, 1]


def test_doubling_orbit_inside_verdict():
    arc = CircleInterval(F(1, 2), F(3, 4))
    rows = doubling_orbit(3, arc)
    assert rows[0][2] == "inside"


def test_orbit_csv_format():
    csv = orbit_csv(doubling_orbit(2, n_min=1, digits=40))
    lines = csv.splitlines()
    assert lines[0] == "n,value,verdict"
    assert lines[1].startswith("1,") and "/2^" in lines[1]


def test_truncated_alpha():
    assert truncated_alpha(16) == alpha_prefix(16)
    assert truncated_alpha(16) == F(1, 2) + F(1, 16) + F(1, 512) + F(1, 2**16)


def test_weyl_examples():
    assert weyl_sum(range(1, 101), F(1, 2)).magnitude < 1e-12
    rep = weyl_sum(range(1, 1001), F(10007, 65536))
    assert rep.magnitude <= 1 / (1000 * abs(math.sin(math.pi * 10007 / 65536)))
    alpha = truncated_alpha(64 * 64)
    hist = weyl_sum(generate(power(2), 60), alpha, bins=4).histogram
    assert hist[3] == 0 and sum(hist) == 60


@settings(max_examples=40)
@given(st.sets(st.integers(1, 20), min_size=1, max_size=6))
def test_supmin_1d_matches_oracle(R):
    r = supmin_1d(R)
    assert (r.value, r.argmax.coords[0]) == grid_supmin(R)
    assert 0 <= r.value <= F(1, 2)


@settings(max_examples=30)
@given(st.lists(st.integers(1, 300), min_size=1, max_size=30, unique=True),
       st.lists(st.integers(1, 300), max_size=10, unique=True),
       st.sampled_from([F(1, 3), F(1, 5), F(1, 8)]))
def test_threshold_monotone_under_supersets(R, extra, eps):
    small = IndexSet.of(R)
    big = IndexSet.of(R + extra)
    a, b = recurrence_threshold(small, eps), recurrence_threshold(big, eps)
    if isinstance(a, Threshold):
        assert isinstance(b, Threshold) and b.N <= a.N


@settings(max_examples=20, deadline=None)
@given(st.lists(st.integers(1, 500), min_size=5, max_size=80, unique=True),
       st.lists(st.sampled_from([1, F(1, 2), F(1, 3), F(1, 4)]), min_size=1, max_size=3))
def test_partition_reconstructs(R, schedule):
    trace = partition_bohr(IndexSet.of(R), schedule)
    assert trace.check()
    for s in trace.stages:
        assert s.cert_A.value < s.epsilon and s.cert_B.value < s.epsilon
        assert _tents.supmin(list(s.A))[0] == s.cert_A.value
