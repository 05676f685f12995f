"""Acceptance criteria as runnable checks.

Each criterion returns ``(passed, artifact)`` where ``artifact`` is a
JSON-ready dict that depends only on fixed seeds.  :func:`run_criterion`
adds wall-clock timing against the stated limit; timings are kept out of the
artifacts so reruns can be compared byte for byte.
"""

from __future__ import annotations

import hashlib
import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction

from .exact_arith import frac_to_str
from .index_sets import IndexSet, difference_set, generate, power
from .interpolation import build_interpolant, verify_interpolation
from .nilseq import (
    average_along,
    build_two_step_witness,
    fast_lacunary,
    nonconvergent_target,
    random_trig_family,
    verify_two_step_witness,
)
from .recurrence import doubling_orbit, partition_bohr, supmin_1d
from .riesz import RieszSpec, correlation_gap_check, partial_product_coefficients, sigma_hat
from .separability import (
    SeparabilityCertificate,
    critical_count_formula,
    critical_points,
    nice_collections,
    separability_1d,
)
from .store import canonical_json

S = frac_to_str


def c1_riesz_closed_form():
    rows = [(n, sigma_hat(3**n), sigma_hat(3**n + n)) for n in range(1, 31)]
    ok = all(a == Fraction(1, 2) and b <= Fraction(1, 4) for _, a, b in rows)
    return ok, {"max_sigma_3n_plus_n": S(max(b for _, _, b in rows)), "n_max": 30}


def c2_oracle_equivalence():
    rng = random.Random(2)
    specs = []
    mismatches = 0
    for _ in range(5):
        raw = [Fraction(rng.randint(-97, 97), rng.randint(1, 97)) for _ in range(9)]
        spec = RieszSpec(tuple(c if abs(c) <= 1 else 1 / c for c in raw))
        # m < 3^8 may carry a digit at position 8, so the product needs 9 factors
        coeffs = partial_product_coefficients(9, spec)
        mismatches += sum(sigma_hat(m, spec) != coeffs.get(m, 0) for m in range(1, 3**8))
        mismatches += coeffs[0] != 1
        specs.append([S(c) for c in spec.coefficients[:9]])
    return mismatches == 0, {"specs": specs, "mismatches": mismatches, "m_range": "1..3^8-1", "N": 9}


def c3_correlation_gap():
    mins = []
    for seed in range(100):
        rep = correlation_gap_check(20, Fraction(1, 16), seed=seed, mode="random")
        mins.append(rep.min_gap)
    worst = correlation_gap_check(20, Fraction(1, 16), mode="worst")
    ok = min(mins) >= Fraction(1, 8) and worst.passed
    return ok, {"min_gap_random": S(min(mins)), "min_gap_worst": S(worst.min_gap), "bound": "1/8"}


def c4_doubling_orbit():
    rows = doubling_orbit(64)
    verdicts = [v for _, _, v in rows]
    ok = len(rows) == 65 and all(v == "outside" for v in verdicts)
    return ok, {"n_range": "0..64", "outside": verdicts.count("outside"),
                "max_error_bits": min(o.error.denominator.bit_length() - 1 for _, o, _ in rows)}


def c5_critical_points():
    rng = random.Random(5)
    ok = True
    records = []
    for _ in range(50):
        size = rng.randint(2, 6)
        F = sorted(rng.sample(range(1, 51), size))
        raw = {}
        for eps in (Fraction(1, 3), Fraction(1, 4), Fraction(1, 5)):
            n_raw = len(critical_points(F, eps, with_multiplicity=True))
            expect = sum(2 * (b - a) for i, a in enumerate(F) for b in F[i + 1:])
            rep = nice_collections(F, eps)
            bound = 2 ** math.ceil(1 / eps) * size * (size - 1) * F[-1]
            good = n_raw == expect == critical_count_formula(F) and rep.distinct_collections <= bound
            ok &= good
            raw[S(eps)] = [n_raw, rep.distinct_collections, bound]
        records.append({"F": F, "counts": raw})
    return ok, {"samples": records}


def _grid_oracle(A, B):
    """max over alpha = p/q (q <= 2 max|a-b|, p <= q/2) of min ||(a-b) alpha||, smallest alpha."""
    diffs = sorted({abs(a - b) for a in A for b in B})
    Q = 2 * diffs[-1]
    best = (-1, 1, Fraction(0))
    for q in range(1, Q + 1):
        for p in range(0, q // 2 + 1):
            if math.gcd(p, q) != 1:
                continue
            v = min(min((m * p) % q, q - (m * p) % q) for m in diffs)
            x = Fraction(p, q)
            lhs, rhs = v * best[1], best[0] * q
            if lhs > rhs or (lhs == rhs and x < best[2]):
                best = (v, q, x)
    return Fraction(best[0], best[1]), best[2]


def c6_separability_oracle():
    rng = random.Random(6)
    eps_choices = [Fraction(1, k) for k in (2, 3, 4, 5, 6, 8, 10)]
    agree = 0
    records = []
    for _ in range(200):
        pool = rng.sample(range(1, 31), rng.randint(2, 8))
        cut = rng.randint(1, len(pool) - 1)
        A, B = sorted(pool[:cut]), sorted(pool[cut:])
        eps = rng.choice(eps_choices)
        sup, arg = _grid_oracle(A, B)
        res = separability_1d(A, B, eps)
        got = res.achieved if isinstance(res, SeparabilityCertificate) else res.sup_achieved
        got_arg = res.alpha.coords[0] if isinstance(res, SeparabilityCertificate) else res.argmax
        same = (isinstance(res, SeparabilityCertificate) == (sup >= eps)) and got == sup and got_arg == arg
        agree += same
        records.append([A, B, S(eps), S(sup), same])
    return agree == 200, {"agree": agree, "pairs": records}


def c7_dichotomy():
    A = generate(power(2), 6)
    B_odd = generate(power(2, 2, -1), 6)
    cert = separability_1d(A, B_odd, Fraction(1, 2))
    ok1 = isinstance(cert, SeparabilityCertificate) and cert.alpha.coords == (Fraction(1, 2),)
    B_even = generate(power(2, 2, 0), 6)
    diffs = difference_set(B_even, A).values
    core = [2, 4, 6, 8, 10, 12]
    ok2 = all(x in diffs for x in core)
    sup_core = supmin_1d(core)
    sup_all = supmin_1d(diffs)
    ok3 = sup_core.value < Fraction(1, 6) and sup_all.value < Fraction(1, 6)
    art = {
        "odd_alpha": cert.alpha.to_json() if isinstance(cert, SeparabilityCertificate) else None,
        "odd_achieved": S(cert.achieved) if isinstance(cert, SeparabilityCertificate) else None,
        "even_differences": [str(d) for d in diffs],
        "supmin_core": S(sup_core.value), "supmin_all": S(sup_all.value),
    }
    return ok1 and ok2 and ok3, art


def c8_interpolation():
    rng = random.Random(8)
    E = IndexSet(tuple(2**n for n in range(1, 9)))
    ok = True
    dyadic_errors = []
    for _ in range(100):
        K = rng.randint(1, 5)
        b = [Fraction(rng.randrange(1 << K), 1 << K) for _ in E]
        psi = build_interpolant(E, b, K, seed=rng.randrange(1 << 30))
        rep = verify_interpolation(psi, E, b)
        ok &= rep.exact and rep.node_exact
        dyadic_errors.append(S(rep.max_error))
    other = []
    for _ in range(20):
        K = rng.randint(1, 5)
        b = [Fraction(rng.randrange(q + 1), q) for q in (rng.choice((3, 5, 7, 9, 11, 13, 97)) for _ in E)]
        psi = build_interpolant(E, b, K)
        rep = verify_interpolation(psi, E, b)
        ok &= rep.passed and rep.max_error <= Fraction(1, 1 << K)
        other.append([K, S(rep.max_error)])
    return ok, {"dyadic_max_errors": sorted(set(dyadic_errors)), "nondyadic": other}


def c9_two_step():
    s = fast_lacunary(Fraction(1, 10), 3)
    w = build_two_step_witness(Fraction(1, 10), 3)
    v = verify_two_step_witness(w, 3, Fraction(3, 10))
    ok = s[0] == 23 and v.passed and v.pairs_checked == 9
    return ok, {"s": [str(x) for x in s], "alpha": S(w.alpha), "pairs": v.pairs_checked,
                "failures": [list(f) for f in v.failures]}


ACCEPT_WINDOWS = ((0, 10_000), (10_000, 20_000), (20_000, 30_000), (30_000, 40_000))


def c10_averaging():
    family = random_trig_family(5, 97, seed=10)
    along_E = [average_along(p, lambda n: n * n, ACCEPT_WINDOWS).oscillation for p in family]
    along_F = [average_along(p, lambda i: (2 * i) ** 2, ACCEPT_WINDOWS).oscillation for p in family]
    target = average_along(nonconvergent_target(2), lambda i: i, ACCEPT_WINDOWS)
    ok = max(along_E) < 1e-2 and max(along_F) < 1e-2 and target.oscillation > 0.2
    return ok, {
        "frequencies": [S(p.terms[0][1]) for p in family],
        "oscillation_E": [format(x, ".6e") for x in along_E],
        "oscillation_F": [format(x, ".6e") for x in along_F],
        "target_oscillation": format(target.oscillation, ".6f"),
    }


def c11_partition():
    R = IndexSet(tuple(range(2, 10_001, 2)))
    schedule = [Fraction(1), Fraction(1, 2), Fraction(1, 3)]
    trace = partition_bohr(R, schedule)
    ok = trace.completed and len(trace.stages) == 3 and trace.check()
    ok &= all(s.cert_A.value < s.epsilon and s.cert_B.value < s.epsilon for s in trace.stages)
    ok &= bool(trace.A) and bool(trace.B)
    return ok, trace.to_json()


@dataclass(frozen=True)
class Criterion:
    number: int
    title: str
    limit: float | None
    fn: object


CRITERIA = [
    Criterion(1, "Riesz closed form", 1.0, c1_riesz_closed_form),
    Criterion(2, "oracle equivalence", 30.0, c2_oracle_equivalence),
    Criterion(3, "correlation gap", 5.0, c3_correlation_gap),
    Criterion(4, "doubling orbit", 1.0, c4_doubling_orbit),
    Criterion(5, "critical-point count", 60.0, c5_critical_points),
    Criterion(6, "separability oracle", 120.0, c6_separability_oracle),
    Criterion(7, "power-set dichotomy", 5.0, c7_dichotomy),
    Criterion(8, "interpolation exactness", 60.0, c8_interpolation),
    Criterion(9, "2-step witness pipeline", 5.0, c9_two_step),
    Criterion(10, "averaging dichotomy", 60.0, c10_averaging),
    Criterion(11, "partition greedy", 120.0, c11_partition),
]


@dataclass
class Outcome:
    number: int
    title: str
    passed: bool
    seconds: float
    limit: float | None
    artifact: dict

    @property
    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        lim = f" (limit {self.limit:g}s)" if self.limit is not None else ""
        return f"criterion {self.number:2d} {self.title}: {status} in {self.seconds:.2f}s{lim}"


def run_criterion(c: Criterion) -> Outcome:
    t0 = time.perf_counter()
    ok, art = c.fn()
    dt = time.perf_counter() - t0
    in_time = c.limit is None or dt < c.limit
    return Outcome(c.number, c.title, bool(ok) and in_time, dt, c.limit, art)


BASE_CRITERIA = tuple(CRITERIA)


def artifacts_bytes() -> bytes:
    """Canonical bytes of every artifact from criteria 1-11."""
    return canonical_json({str(c.number): c.fn()[1] for c in BASE_CRITERIA}).encode()


def c12_determinism() -> tuple[bool, dict]:
    first = artifacts_bytes()
    second = artifacts_bytes()
    return first == second, {"sha256": hashlib.sha256(first).hexdigest(), "bytes": len(first)}


CRITERIA.append(Criterion(12, "determinism", None, c12_determinism))


def run_all(only=None) -> list[Outcome]:
    return [run_criterion(c) for c in CRITERIA if only is None or c.number in only]
