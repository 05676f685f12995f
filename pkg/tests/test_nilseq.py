from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from interpolab.exact_arith import TorusPoint, circle_dist, torus_reduce
from interpolab.index_sets import IndexSet
from interpolab.interpolation import build_interpolant, verify_interpolation
from interpolab.nilseq import (
    QuadraticPhase,
    TrigPolynomial,
    TwoStepWitness,
    average_along,
    build_two_step_witness,
    check_growth,
    fast_lacunary,
    nested_interval_alpha,
    nonconvergent_target,
    polynomial_non_I0_demo,
    random_trig_family,
    relative_density,
    square_lift,
    verify_two_step_witness,
)
from oracles import scan_fast_lacunary

WINDOWS = ((0, 100), (100, 1000), (1000, 10_000), (5000, 15_000))


def test_root_of_unity_cancels():
    psi = TrigPolynomial.monomial(F(2, 7))
    rep = average_along(psi, range(1, 15_001), ((0, 7), (7, 70), (700, 7000)))
    assert all(abs(a) < 1e-12 for a in rep.averages)


def test_constant_sequence_averages_to_one():
    rep = average_along(lambda n: 1, lambda i: i, WINDOWS)
    assert all(a == 1 for a in rep.averages) and rep.oscillation == 0


def test_quadratic_phase_averages_decay():
    q = QuadraticPhase(F(1_000_003, 2**31))
    rep = average_along(q, lambda i: i, WINDOWS)
    assert abs(rep.averages[-1]) < 0.05 and rep.oscillation < 0.05
    assert abs(abs(q(12345)) - 1) < 1e-12


def test_window_beyond_prefix():
    with pytest.raises(ValueError):
        average_along(lambda n: 1, [1, 2, 3], ((0, 4),))


def test_averaging_csv():
    rep = average_along(TrigPolynomial.monomial(F(1, 3)), lambda i: i, ((0, 3), (3, 9)))
    lines = rep.to_csv().splitlines()
    assert lines[0] == "window,average_real,average_imag,oscillation"
    assert len(lines) == 3


def test_trig_sup_bound():
    p = TrigPolynomial(((2 + 0j, F(1, 5)), (-1j, F(2, 3))))
    assert p.sup_bound == 3
    assert all(abs(p(n)) <= 3 + 1e-12 for n in range(50))


def test_nonconvergent_target_factor_two():
    t = nonconvergent_target(2)
    assert [t(i) for i in range(1, 8)] == [0, 1, 1, 0, 0, 0, 0]
    assert t.boundary_averages(5) == [0, F(2, 3), F(2, 7), F(2, 3), F(10, 31)]
    assert (t.liminf, t.limsup) == (F(1, 3), F(2, 3))
    late = t.boundary_averages(40)[-2:]
    assert min(abs(x - F(1, 3)) for x in late) < F(1, 10**6)
    assert min(abs(x - F(2, 3)) for x in late) < F(1, 10**6)


def test_nonconvergent_target_factor_four_is_wider():
    t2, t4 = nonconvergent_target(2), nonconvergent_target(4)
    assert t4.limsup - t4.liminf > t2.limsup - t2.liminf
    with pytest.raises(ValueError):
        nonconvergent_target(1)


def test_relative_density_examples():
    E = list(range(1, 2001))
    W = ((0, 500), (500, 1000), (1000, 2000))
    assert relative_density(E[1::2], E, W).upper_estimate == F(1, 2)
    assert relative_density(E, E, W).upper_estimate == 1
    squares = [E[i * i - 1] for i in range(1, 45)]
    assert relative_density(squares, E, W).upper_estimate < F(1, 20)
    with pytest.raises(ValueError):
        relative_density([5000], E, W)


def test_polynomial_demo_dichotomy():
    W = ((0, 10_000), (10_000, 20_000), (20_000, 30_000))
    rep = polynomial_non_I0_demo(lambda n: n * n, "even", windows=W, seed=3)
    assert rep["family_oscillation"] < 1e-2 and rep["target_oscillation"] > 0.2
    lin = polynomial_non_I0_demo(lambda n: n, "all", windows=W, seed=4)
    assert lin["family_oscillation"] < 1e-2 and lin["target_oscillation"] > 0.2
    one = polynomial_non_I0_demo(lambda n: n, "all", family=[lambda n: 1], windows=W)
    assert one["family_oscillation"] == 0


def test_random_family_is_seeded():
    a = random_trig_family(5, 97, seed=10)
    b = random_trig_family(5, 97, seed=10)
    assert [p.terms for p in a] == [p.terms for p in b]
    assert all(p.terms[0][1].denominator <= 97 for p in a)


def test_fast_lacunary_example():
    s = fast_lacunary(F(1, 10), 3)
    assert s.elements == (23, 1454, 3875878)
    assert list(s) == scan_fast_lacunary(F(1, 10), 3)
    assert F(23**2, 47) > 11 and F(22**2, 45) <= 11


@pytest.mark.parametrize("ell", [F(1, 2), F(0), F(3, 4)])
def test_fast_lacunary_rejects(ell):
    with pytest.raises(ValueError):
        fast_lacunary(ell, 2)


def test_nested_interval_first_stage():
    s = fast_lacunary(F(1, 10), 3)
    alpha, arc = nested_interval_alpha(s, F(1, 10), 1)
    c1, d1 = 2 * 23 + 1, 23 * 23
    assert F(1, 2) < torus_reduce(c1 * alpha) < F(3, 5)
    assert 0 < torus_reduce(d1 * alpha) < F(1, 10)
    assert arc.length == F(1, 10) / d1
    assert nested_interval_alpha(s, F(1, 10), 0)[0] == 0


def test_nested_interval_detects_slow_growth():
    with pytest.raises(RuntimeError):
        nested_interval_alpha([3, 4, 5], F(1, 10), 3)


def test_two_step_pipeline():
    w = build_two_step_witness(F(1, 10), 3)
    v = verify_two_step_witness(w, 3, F(3, 10))
    assert v.passed and v.pairs_checked == 9 and not v.failures
    one = verify_two_step_witness(w, 1, F(3, 10))
    assert one.pairs_checked == 1 and one.passed
    with pytest.raises(ValueError):
        verify_two_step_witness(w, 3, F(1, 5))
    back = TwoStepWitness.from_json(w.to_json())
    assert back.s.elements == w.s.elements
    assert (back.ell, back.alpha, back.enclosure, back.N) == (w.ell, w.alpha, w.enclosure, w.N)


def test_square_lift_pipeline():
    w = build_two_step_witness(F(1, 10), 3)
    s = w.s.elements
    A = [x * x for x in s]
    B = [(x + n) ** 2 for n, x in enumerate(s, start=1)]
    E = IndexSet.of(A + B)
    b = [F(1, 2) if e in B else F(0) for e in E]
    theta = build_interpolant(E, b, 1, candidates=[TorusPoint.of(w.alpha)])
    assert theta.levels[0].alpha == TorusPoint.of(w.alpha)
    assert verify_interpolation(theta, E, b).exact
    psi = square_lift(theta)
    assert all(psi(x) == 0 for x in s)
    assert all(psi(x + n) == F(1, 2) for n, x in enumerate(s, start=1))


def test_square_lift_basics():
    alpha = F(3, 17)
    lifted = square_lift(TrigPolynomial.monomial(alpha))
    q = QuadraticPhase(alpha)
    assert all(abs(lifted(n) - q(n)) < 1e-12 for n in range(40))
    assert all(square_lift(lambda m: 7)(n) == 7 for n in range(10))
    bounded = square_lift(lambda m: m, max_n=10)
    assert bounded(10) == 100
    with pytest.raises(ValueError):
        bounded(11)


@settings(max_examples=20, deadline=None)
@given(st.fractions(F(1, 40), F(12, 25), max_denominator=60), st.integers(1, 5))
def test_pipeline_passes_for_any_ell(ell, N):
    s = fast_lacunary(ell, N)
    assert check_growth(s, ell)
    c = [2 * n * x + n * n for n, x in enumerate(s, start=1)]
    d = [x * x for x in s]
    inter = [v for pair in zip(c, d) for v in pair]
    assert inter == sorted(inter) and len(set(inter)) == len(inter)
    w = build_two_step_witness(ell, N)
    assert w.enclosure.contains(w.alpha) and w.enclosure.length > 0
    assert verify_two_step_witness(w, N, 3 * ell).passed


@settings(max_examples=10, deadline=None)
@given(st.fractions(F(1, 20), F(7, 15), max_denominator=30))
def test_fast_lacunary_matches_scan(ell):
    assert list(fast_lacunary(ell, 2)) == scan_fast_lacunary(ell, 2)


@settings(max_examples=30)
@given(st.integers(1, 10**6), st.fractions(0, 1, max_denominator=1000))
def test_square_lift_definition(n, alpha):
    theta = lambda m: torus_reduce(m * alpha)  # noqa: E731
    assert square_lift(theta)(n) == theta(n * n)
    assert circle_dist(square_lift(theta)(n), torus_reduce(n * n * alpha)) == 0


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10**6))
def test_trig_averages_settle_along_squares(seed):
    W = ((0, 5000), (5000, 10_000), (10_000, 15_000), (15_000, 20_000))
    for p in random_trig_family(2, 97, seed=seed):
        rep = average_along(p, lambda i: i * i, W)
        assert rep.oscillation < 0.05
        assert all(abs(a) <= p.sup_bound + 1e-12 for a in rep.averages)
