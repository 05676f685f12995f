"""Trigonometric and quadratic phases, averages along subsequences, and a
two-step interpolation witness built from a fast-growing lacunary set.

Phases are reduced exactly (n * p mod q) before the single conversion to a
double, so huge n costs no precision.  All interval logic is exact.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .exact_arith import CircleInterval, frac_to_str, parse_rational, torus_reduce
from .index_sets import IndexSet

__all__ = [
    "AveragingReport",
    "NonconvergentTarget",
    "QuadraticPhase",
    "TrigPolynomial",
    "TwoStepWitness",
    "WitnessVerdict",
    "DEFAULT_WINDOWS",
    "average_along",
    "build_two_step_witness",
    "check_growth",
    "random_trig_family",
    "DensityReport",
    "fast_lacunary",
    "nested_interval_alpha",
    "nonconvergent_target",
    "polynomial_non_I0_demo",
    "relative_density",
    "square_lift",
    "verify_two_step_witness",
]

DEFAULT_WINDOWS = ((0, 100), (100, 1000), (1000, 10_000), (5000, 15_000))


def _e(n: int, freq: Fraction) -> complex:
    """e^{2 pi i n freq} with the phase reduced exactly first."""
    r = (n * freq.numerator) % freq.denominator
    return cmath.exp(2j * math.pi * float(Fraction(r, freq.denominator)))


@dataclass(frozen=True)
class TrigPolynomial:
    terms: tuple[tuple[complex, Fraction], ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple((complex(c), torus_reduce(parse_rational(f)))
                                                for c, f in self.terms))

    @classmethod
    def monomial(cls, freq, coef: complex = 1) -> "TrigPolynomial":
        return cls(((coef, parse_rational(freq)),))

    @property
    def sup_bound(self) -> float:
        return math.fsum(abs(c) for c, _ in self.terms)

    def __call__(self, n: int) -> complex:
        acc = [c * _e(n, f) for c, f in self.terms]
        return complex(math.fsum(z.real for z in acc), math.fsum(z.imag for z in acc))


@dataclass(frozen=True)
class QuadraticPhase:
    alpha: Fraction

    def __post_init__(self):
        object.__setattr__(self, "alpha", torus_reduce(parse_rational(self.alpha)))

    sup_bound = 1.0

    def __call__(self, n: int) -> complex:
        return _e(n * n, self.alpha)


def square_lift(theta: Callable[[int], object], max_n: int | None = None) -> Callable[[int], object]:
    """psi(n) = theta(n^2); ``max_n`` guards the range theta is trusted on."""

    def psi(n: int):
        if max_n is not None and n > max_n:
            raise ValueError(f"square_lift evaluated at {n} > {max_n}")
        return theta(n * n)

    return psi


# -- averaging ----------------------------------------------------------------


@dataclass(frozen=True)
class AveragingReport:
    windows: tuple[tuple[int, int], ...]
    averages: tuple[complex, ...]
    oscillation: float  # max |avg_i - avg_j| over the last half of the windows
    sup_bound: float | None

    def to_csv(self) -> str:
        lines = ["window,average_real,average_imag,oscillation"]
        for k, ((m, n), a) in enumerate(zip(self.windows, self.averages)):
            step = "" if k == 0 else repr(abs(a - self.averages[k - 1]))
            lines.append(f"{m}:{n},{a.real!r},{a.imag!r},{step}")
        return "\n".join(lines) + "\n"


def _oscillation(values: Sequence[complex]) -> float:
    tail = values[len(values) // 2:] if len(values) > 1 else values
    return max((abs(a - b) for a in tail for b in tail), default=0.0)


def average_along(psi: Callable[[int], object], S, windows=DEFAULT_WINDOWS) -> AveragingReport:
    """Averages of psi(s_i) over index windows (M, N] (1-based indices into S).

    ``S`` is a sequence of integers or a callable i -> s_i (then no prefix
    bound applies).
    """
    windows = tuple((int(m), int(n)) for m, n in windows)
    if not windows:
        raise ValueError("no windows")
    if callable(S):
        get = S
        limit = None
    else:
        seq = list(S)
        get = lambda i: seq[i - 1]  # noqa: E731
        limit = len(seq)
    cache: dict[int, complex] = {}
    avgs = []
    for m, n in windows:
        if not 0 <= m < n:
            raise ValueError(f"bad window ({m}, {n}]")
        if limit is not None and n > limit:
            raise ValueError(f"window ({m}, {n}] exceeds prefix of length {limit}")
        vals = []
        for i in range(m + 1, n + 1):
            v = cache.get(i)
            if v is None:
                v = complex(psi(get(i)))
                cache[i] = v
            vals.append(v)
        size = n - m
        avgs.append(complex(math.fsum(v.real for v in vals) / size, math.fsum(v.imag for v in vals) / size))
    bound = getattr(psi, "sup_bound", None)
    return AveragingReport(windows, tuple(avgs), _oscillation(avgs), bound)


@dataclass(frozen=True)
class NonconvergentTarget:
    """0/1 blocks of lengths factor^j (block j has value j mod 2), indexed from 1."""

    factor: int

    def block_end(self, j: int) -> int:
        """Last index of block j."""
        return (self.factor ** (j + 1) - 1) // (self.factor - 1)

    def __call__(self, i: int) -> int:
        if i < 1:
            raise ValueError("index must be >= 1")
        j = 0
        while self.block_end(j) < i:
            j += 1
        return j % 2

    sup_bound = 1.0

    def boundary_averages(self, blocks: int) -> list[Fraction]:
        """Exact Cesaro averages at the end of blocks 0..blocks-1."""
        out = []
        ones = 0
        for j in range(blocks):
            if j % 2:
                ones += self.factor**j
            out.append(Fraction(ones, self.block_end(j)))
        return out

    @property
    def limsup(self) -> Fraction:
        return Fraction(self.factor, self.factor + 1)

    @property
    def liminf(self) -> Fraction:
        return Fraction(1, self.factor + 1)


def nonconvergent_target(factor: int = 2) -> NonconvergentTarget:
    if int(factor) != factor or factor < 2:
        raise ValueError("block growth factor must be an integer >= 2")
    return NonconvergentTarget(int(factor))


@dataclass(frozen=True)
class DensityReport:
    per_window: tuple[Fraction, ...]
    upper_estimate: Fraction


def relative_density(F: Iterable[int], E: Sequence[int], windows) -> DensityReport:
    """Fraction of E-indices in each window (M, N] whose element lies in F."""
    E = list(E)
    members = set(F)
    if not members <= set(E):
        raise ValueError("F is not a subset of E")
    flags = [e in members for e in E]
    per = []
    for m, n in windows:
        if n > len(E) or not 0 <= m < n:
            raise ValueError(f"bad window ({m}, {n}]")
        per.append(Fraction(sum(flags[m:n]), n - m))
    tail = per[len(per) // 2:] if len(per) > 1 else per
    return DensityReport(tuple(per), max(tail))


def random_trig_family(count: int = 5, max_den: int = 97, seed: int = 0) -> list[TrigPolynomial]:
    rng = random.Random(seed)
    fam = []
    for _ in range(count):
        q = rng.randint(2, max_den)
        fam.append(TrigPolynomial.monomial(Fraction(rng.randrange(1, q), q)))
    return fam


def polynomial_non_I0_demo(P: Callable[[int], int], selector: str | Callable = "even",
                           family: Sequence[Callable] | None = None, windows=DEFAULT_WINDOWS,
                           factor: int = 2, seed: int = 0) -> dict:
    """Nilsequence averages along F settle while a 0/1 target along F does not.

    F is chosen from E = {P(n)} by ``selector``: "even" keeps even indices,
    "all" keeps everything, or a callable maps i to the i-th chosen index.
    """
    if selector == "even":
        pick = lambda n: 2 * n  # noqa: E731
        density = Fraction(1, 2)
    elif selector == "all":
        pick = lambda n: n  # noqa: E731
        density = Fraction(1)
    elif callable(selector):
        pick = selector
        density = None
    else:
        raise ValueError(f"unknown selector {selector!r}")
    F = lambda i: P(pick(i))  # noqa: E731
    family = list(family) if family is not None else random_trig_family(seed=seed)
    fam_reports = [average_along(psi, F, windows) for psi in family]
    target = nonconvergent_target(factor)
    target_report = average_along(target, lambda i: i, windows)
    return {
        "family": fam_reports,
        "family_oscillation": max(r.oscillation for r in fam_reports),
        "target": target_report,
        "target_oscillation": target_report.oscillation,
        "density": density,
    }


# -- the two-step witness ------------------------------------------------------


def _check_ell(ell) -> Fraction:
    ell = parse_rational(ell)
    if not 0 < ell < Fraction(1, 2):
        raise ValueError("ell must lie in (0, 1/2)")
    return ell


def fast_lacunary(ell, N: int) -> IndexSet:
    """Greedy minimal s_1 < s_2 < ... with, for K = 1/ell + 1,
    s_n^2 / (2 n s_n + n^2) > K and (2 (n+1) s_{n+1} + (n+1)^2) / s_n^2 > K.
    """
    ell = _check_ell(ell)
    if N < 1:
        raise ValueError("N must be >= 1")
    K = 1 / ell + 1
    p, q = K.numerator, K.denominator
    out: list[int] = []
    for n in range(1, N + 1):
        # s^2 > K (2 n s + n^2)  <=>  s > n (p + sqrt(p^2 + p q)) / q
        s = n * (p + math.isqrt(p * p + p * q)) // q
        while s * s * q <= p * (2 * n * s + n * n):
            s += 1
        while s > 1 and (s - 1) ** 2 * q > p * (2 * n * (s - 1) + n * n):
            s -= 1
        if out:
            s = max(s, out[-1] + 1)
            d_prev = out[-1] ** 2
            # 2 n s + n^2 > K d_prev
            s = max(s, math.floor((K * d_prev - n * n) / (2 * n)) + 1)
        out.append(s)
    return IndexSet(tuple(out), f"fast_lacunary({ell})")


def _cd(s: Sequence[int]) -> tuple[list[int], list[int]]:
    c = [2 * n * sn + n * n for n, sn in enumerate(s, start=1)]
    d = [sn * sn for sn in s]
    return c, d


def check_growth(s: Sequence[int], ell) -> bool:
    K = 1 / parse_rational(ell) + 1
    c, d = _cd(s)
    ok = all(Fraction(dn, cn) > K for cn, dn in zip(c, d))
    return ok and all(Fraction(c[i + 1], d[i]) > K for i in range(len(s) - 1))


def nested_interval_alpha(s: Sequence[int], ell, N: int) -> tuple[Fraction, CircleInterval]:
    """Descend through components of J_C,n and J_D,n and return the midpoint.

    At each stage the left-most component contained in the current arc is
    chosen.  Failure of containment raises, since it means ``s`` does not
    grow fast enough.
    """
    ell = _check_ell(ell)
    s = list(s)
    if not 0 <= N <= len(s):
        raise ValueError("N out of range")
    if N == 0:
        return Fraction(0), CircleInterval.full()
    c, d = _cd(s)
    lo, hi = Fraction(0), Fraction(1)
    half = Fraction(1, 2)
    for n in range(N):
        cn, dn = c[n], d[n]
        t = math.ceil(lo * cn - half)
        a, b = (half + t) / cn, (half + ell + t) / cn
        if b > hi:
            raise RuntimeError(f"no component of J_C,{n + 1} inside the current arc")
        lo, hi = a, b
        t = math.ceil(lo * dn)
        a, b = Fraction(t, dn), (t + ell) / dn
        if b > hi:
            raise RuntimeError(f"no component of J_D,{n + 1} inside the current arc")
        lo, hi = a, b
    return (lo + hi) / 2, CircleInterval.open(lo, hi)


@dataclass(frozen=True)
class TwoStepWitness:
    ell: Fraction
    s: IndexSet
    alpha: Fraction
    enclosure: CircleInterval
    N: int

    @property
    def c(self) -> list[int]:
        return _cd(self.s.elements)[0]

    @property
    def d(self) -> list[int]:
        return _cd(self.s.elements)[1]

    def to_json(self) -> dict:
        return {
            "schema": "interpolab/two-step-witness@1",
            "ell": frac_to_str(self.ell),
            "s": [str(x) for x in self.s],
            "N": self.N,
            "alpha": frac_to_str(self.alpha),
            "enclosure": self.enclosure.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "TwoStepWitness":
        return cls(parse_rational(data["ell"]), IndexSet(tuple(int(x) for x in data["s"])),
                   parse_rational(data["alpha"]), CircleInterval.from_json(data["enclosure"]),
                   int(data["N"]))


def build_two_step_witness(ell, N: int) -> TwoStepWitness:
    s = fast_lacunary(ell, N)
    alpha, arc = nested_interval_alpha(s, ell, N)
    return TwoStepWitness(parse_rational(ell), s, alpha, arc, N)


@dataclass(frozen=True)
class WitnessVerdict:
    passed: bool
    pairs_checked: int
    failures: tuple[tuple[int, int], ...]
    stage_conditions: bool  # c_n alpha in (1/2, 1/2 + ell) and d_n alpha in (0, ell)


def verify_two_step_witness(w: TwoStepWitness, N: int, c) -> WitnessVerdict:
    """Exact check that ((s_n + n)^2 - s_m^2) alpha mod 1 lies in (1/2 - c, 1/2 + c)."""
    c = parse_rational(c)
    if w.ell != c / 3:
        raise ValueError("the witness must use ell = c/3")
    if not 1 <= N <= min(w.N, len(w.s)):
        raise ValueError("N out of range")
    s = w.s.elements
    cs, ds = _cd(s)
    if c > Fraction(1, 2):
        arc = CircleInterval.full()  # the window wraps all the way round
    else:
        arc = CircleInterval.open(Fraction(1, 2) - c, Fraction(1, 2) + c)
    failures = []
    checked = 0
    for n in range(1, N + 1):
        for m in range(1, N + 1):
            diff = (s[n - 1] + n) ** 2 - s[m - 1] ** 2
            if diff != cs[n - 1] + ds[n - 1] - ds[m - 1]:
                raise AssertionError("difference identity broken")
            checked += 1
            if not arc.contains(diff * w.alpha):
                failures.append((n, m))
    I_C = CircleInterval.open(Fraction(1, 2), Fraction(1, 2) + w.ell)
    I_D = CircleInterval.open(Fraction(0), w.ell)
    stage = all(I_C.contains(cs[n] * w.alpha) and I_D.contains(ds[n] * w.alpha) for n in range(N))
    return WitnessVerdict(not failures and stage, checked, tuple(failures), stage)
