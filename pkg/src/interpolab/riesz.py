"""Balanced ternary digits, Riesz-product Fourier coefficients and the
correlation gap between 3^n and 3^n + n.

For P_N(t) = prod_{j<N} (1 + c_j cos(3^j t)) the coefficient at m is the sum,
over sign patterns with sum eps_j 3^j = m, of prod_{eps_j != 0} c_j / 2.
Balanced-ternary uniqueness leaves exactly one pattern, which gives the
closed form in :func:`sigma_hat`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

from .exact_arith import frac_to_str, parse_rational

__all__ = [
    "BalancedTernary",
    "CorrelationModel",
    "GapReport",
    "LiminfReport",
    "RieszSpec",
    "correlation_gap_check",
    "from_balanced_ternary",
    "liminf_gap_experiment",
    "oracle_degree",
    "partial_product_coefficients",
    "partial_product_oracle",
    "sigma_hat",
    "to_balanced_ternary",
]

ORACLE_MAX_N = 14


@dataclass(frozen=True)
class BalancedTernary:
    """Digits eps_0, eps_1, ... (little-endian) in {-1, 0, 1}, last digit nonzero."""

    digits: tuple[int, ...]

    def __post_init__(self):
        if any(d not in (-1, 0, 1) for d in self.digits):
            raise ValueError("balanced ternary digits must be -1, 0 or 1")
        if self.digits and self.digits[-1] == 0:
            raise ValueError("leading digit must be nonzero")

    @property
    def value(self) -> int:
        return from_balanced_ternary(self.digits)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(j for j, d in enumerate(self.digits) if d)

    def __str__(self) -> str:
        return "".join({1: "+", 0: "0", -1: "-"}[d] for d in reversed(self.digits))


def to_balanced_ternary(n: int) -> BalancedTernary:
    if n <= 0:
        raise ValueError("balanced ternary is defined here for n >= 1")
    digits = []
    while n:
        r = n % 3
        if r == 2:
            digits.append(-1)
            n = (n + 1) // 3
        else:
            digits.append(r)
            n //= 3
    return BalancedTernary(tuple(digits))


def from_balanced_ternary(digits: Sequence[int]) -> int:
    return sum(d * 3**j for j, d in enumerate(digits))


@dataclass(frozen=True)
class RieszSpec:
    """Coefficients c_0, c_1, ...; positions past the list use ``default`` if given."""

    coefficients: tuple[Fraction, ...] = ()
    default: Fraction | None = None

    def __post_init__(self):
        cs = tuple(parse_rational(c) for c in self.coefficients)
        object.__setattr__(self, "coefficients", cs)
        if self.default is not None:
            object.__setattr__(self, "default", parse_rational(self.default))
        for c in cs + ((self.default,) if self.default is not None else ()):
            if abs(c) > 1:
                raise ValueError(f"|c_j| must be <= 1, got {c}")

    @classmethod
    def constant(cls, c=1) -> "RieszSpec":
        return cls((), parse_rational(c))

    def __getitem__(self, j: int) -> Fraction:
        if j < len(self.coefficients):
            return self.coefficients[j]
        if self.default is None:
            raise IndexError(f"spec has no coefficient at position {j}")
        return self.default

    def to_json(self) -> dict:
        return {"coefficients": [frac_to_str(c) for c in self.coefficients],
                "default": frac_to_str(self.default) if self.default is not None else None}


ONES = RieszSpec.constant(1)


def sigma_hat(n: int, spec: RieszSpec = ONES) -> Fraction:
    """Fourier coefficient of the Riesz product at n >= 1 (closed form)."""
    if n == 0:
        return Fraction(1)
    bt = to_balanced_ternary(abs(n))
    out = Fraction(1)
    for j in bt.support:
        try:
            out *= spec[j] / 2
        except IndexError:
            raise ValueError(f"spec too short for n={n} (needs position {j})") from None
    return out


@lru_cache(maxsize=32)
def _expand(cs: tuple[Fraction, ...]) -> dict[int, Fraction]:
    coeffs = {0: Fraction(1)}
    for j, c in enumerate(cs):
        if c == 0:
            continue
        f = 3**j
        half = c / 2
        nxt = dict(coeffs)
        for m, v in coeffs.items():
            for m2 in (m + f, m - f):
                nxt[m2] = nxt.get(m2, Fraction(0)) + half * v
        coeffs = nxt
    return coeffs


def partial_product_coefficients(N: int, spec: RieszSpec) -> dict[int, Fraction]:
    """All nonzero Fourier coefficients of P_N by expanding the product."""
    if not 0 <= N <= ORACLE_MAX_N:
        raise ValueError(f"N must lie in [0, {ORACLE_MAX_N}]")
    return dict(_expand(tuple(spec[j] for j in range(N))))


def partial_product_oracle(N: int, spec: RieszSpec, m: int) -> Fraction:
    if not 0 <= m < 3**N:
        raise ValueError("need 0 <= m < 3^N")
    return partial_product_coefficients(N, spec).get(m, Fraction(0))


def oracle_degree(m: int) -> int:
    """Smallest N whose product P_N reaches frequency m, i.e. (3^N - 1)/2 >= m."""
    N = 0
    while (3**N - 1) // 2 < m:
        N += 1
    return N


@dataclass(frozen=True)
class CorrelationModel:
    """a(n) = sigma_hat(n) + p(n) with |p(n)| < delta.

    ``mode`` is "random" (seeded, p(n) = k delta / 2^20 with |k| < 2^20),
    "worst" (p = -(delta - eta) on powers of 3 and +(delta - eta) elsewhere,
    eta = delta / 2^20, which squeezes the 3^n versus 3^n + n gap) or "zero".
    """

    delta: Fraction
    seed: int = 0
    mode: str = "random"

    def __post_init__(self):
        object.__setattr__(self, "delta", parse_rational(self.delta))
        if self.mode not in ("random", "worst", "zero"):
            raise ValueError(f"unknown perturbation mode {self.mode!r}")
        if self.delta <= 0:
            raise ValueError("delta must be positive")

    def perturbation(self, n: int) -> Fraction:
        scale = 1 << 20
        if self.mode == "zero":
            return Fraction(0)
        if self.mode == "worst":
            step = self.delta - self.delta / scale
            return -step if _is_power_of_3(n) else step
        k = random.Random(f"{self.seed}:{n}").randint(-(scale - 1), scale - 1)
        return Fraction(k, scale) * self.delta

    def __call__(self, n: int) -> Fraction:
        return sigma_hat(n) + self.perturbation(n)

    def to_json(self) -> dict:
        return {"delta": frac_to_str(self.delta), "seed": self.seed, "mode": self.mode}


def _is_power_of_3(n: int) -> bool:
    while n > 1 and n % 3 == 0:
        n //= 3
    return n == 1


@dataclass(frozen=True)
class GapReport:
    model: CorrelationModel
    rows: tuple[tuple[int, Fraction, Fraction, Fraction], ...]  # n, sigma(3^n), sigma(3^n+n), gap
    min_gap: Fraction
    bound: Fraction

    @property
    def passed(self) -> bool:
        return self.min_gap >= self.bound

    def to_csv(self) -> str:
        lines = ["n,sigma_hat_3n,sigma_hat_3n_plus_n,gap"]
        for n, a, b, g in self.rows:
            lines.append(f"{n},{frac_to_str(a)},{frac_to_str(b)},{frac_to_str(g)}")
        return "\n".join(lines) + "\n"


def correlation_gap_check(n_max: int, delta="1/16", seed: int = 0, mode: str = "random") -> GapReport:
    """|a(3^n + n) - a(3^n)| for n <= n_max against the bound 1/2 - 1/4 - 2 delta."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    delta = parse_rational(delta)
    if delta >= Fraction(1, 8):
        raise ValueError("delta must be < 1/8 for a positive bound")
    model = CorrelationModel(delta, seed, mode)
    rows = []
    for n in range(1, n_max + 1):
        x, y = 3**n, 3**n + n
        for m in (x, y):
            if not abs(model.perturbation(m)) < delta:
                raise AssertionError("perturbation exceeds delta")
        rows.append((n, sigma_hat(x), sigma_hat(y), abs(model(y) - model(x))))
    bound = Fraction(1, 2) - Fraction(1, 4) - 2 * delta
    return GapReport(model, tuple(rows), min(r[3] for r in rows), bound)


@dataclass(frozen=True)
class LiminfReport:
    qualifying: tuple[int, ...]
    max_gap: int | None
    lower_bound: Fraction  # on (1/(2 n_max)) sum_{k <= 2 n_max} |a(r_k) - psi(r_k)|
    observed: float


def liminf_gap_experiment(psi: Callable[[int], object], n_max: int, epsilon="1/16",
                          model: CorrelationModel | None = None) -> LiminfReport:
    """Where psi barely moves between 3^n and 3^n + n, a must be missed by psi.

    At each qualifying n the triangle inequality forces
    |a(3^n + n) - psi(3^n + n)| + |a(3^n) - psi(3^n)| > 1/8 - eps, which with
    eps = 1/16 is > 1/16; spread over the 2 n_max points this gives the
    reported lower bound.
    """
    eps = parse_rational(epsilon)
    model = model or CorrelationModel(Fraction(1, 16), 0, "random")
    qual = [n for n in range(1, n_max + 1) if abs(psi(3**n + n) - psi(3**n)) < eps]
    gap = max((b - a for a, b in zip([0] + qual, qual)), default=None)
    per_pair = Fraction(1, 4) - 2 * model.delta - eps
    bound = per_pair * len(qual) / (2 * n_max) if per_pair > 0 else Fraction(0)
    total = 0.0
    for n in range(1, n_max + 1):
        for m in (3**n, 3**n + n):
            total += abs(complex(model(m)) - complex(psi(m)))
    return LiminfReport(tuple(qual), gap, bound, total / (2 * n_max))
