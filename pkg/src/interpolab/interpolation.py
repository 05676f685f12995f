"""Interpolating bounded targets on finite sets by sums of rotated bumps.

A target b with values in [0, 1] is cut into binary levels b_k taking the
values 0 and 2^-k.  For each level the two supports are separated by a
rotation alpha_k and a bump function equal to 0 on one orbit image and 2^-k
on the other is placed on the torus.  The interpolant is
psi(n) = sum_k bump_k(n alpha_k), which is periodic when every alpha_k is
rational.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .exact_arith import TorusPoint, frac_to_str, parse_rational, scalar_orbit, set_dist, torus_dist
from .index_sets import IndexSet
from .separability import (
    SeparabilityCertificate,
    orbit_distance,
    separability_1d,
    separability_nd,
)

__all__ = [
    "BumpFunction",
    "Interpolant",
    "Level",
    "PeriodReport",
    "SeparationFailed",
    "TargetSequence",
    "VerificationReport",
    "binary_decompose",
    "build_interpolant",
    "epsilon_periods",
    "urysohn_eval",
    "verify_interpolation",
]

DEFAULT_FLOOR = Fraction(1, 256)


class SeparationFailed(RuntimeError):
    def __init__(self, level: int, A: Sequence[int], B: Sequence[int], best: Fraction | None = None):
        self.level = level
        self.A = tuple(A)
        self.B = tuple(B)
        self.best = best
        super().__init__(f"level {level}: no separating rotation found for |A|={len(A)}, |B|={len(B)}"
                         + (f" (best {best})" if best is not None else ""))


@dataclass(frozen=True)
class TargetSequence:
    E: IndexSet
    values: tuple[Fraction, ...]

    def __post_init__(self):
        vals = tuple(parse_rational(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if len(vals) != len(self.E):
            raise ValueError("target length differs from |E|")
        for v in vals:
            if not 0 <= v <= 1:
                raise ValueError(f"target value {v} outside [0, 1]")

    @classmethod
    def of(cls, E, values) -> "TargetSequence":
        E = E if isinstance(E, IndexSet) else IndexSet(tuple(E))
        return cls(E, tuple(values))

    def to_json(self) -> dict:
        return {"E": self.E.to_json(), "values": [frac_to_str(v) for v in self.values]}

    @classmethod
    def from_json(cls, data: dict) -> "TargetSequence":
        return cls(IndexSet.from_json(data["E"]), tuple(parse_rational(v) for v in data["values"]))


def _bits(v: Fraction, K: int) -> int:
    """First K binary digits of v as an integer, with 1 read as 0.11...1."""
    return min(math.floor(v * (1 << K)), (1 << K) - 1)


def binary_decompose(b, K: int) -> list[tuple[Fraction, ...]]:
    """Levels b_1..b_K with b_k(n) in {0, 2^-k}; their sum truncates b to K bits.

    Dyadic values use the terminating expansion.  The value 1 has no K-bit
    expansion and becomes 1 - 2^-K.
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    values = b.values if isinstance(b, TargetSequence) else tuple(parse_rational(v) for v in b)
    for v in values:
        if not 0 <= v <= 1:
            raise ValueError(f"target value {v} outside [0, 1]")
    words = [_bits(v, K) for v in values]
    levels = []
    for k in range(1, K + 1):
        amp = Fraction(1, 1 << k)
        levels.append(tuple(amp if (w >> (K - k)) & 1 else Fraction(0) for w in words))
    return levels


@dataclass(frozen=True)
class BumpFunction:
    """amplitude * d(x, S_A) / (d(x, S_A) + d(x, S_B)), or a constant when a side is empty."""

    dim: int
    S_A: tuple[TorusPoint, ...]
    S_B: tuple[TorusPoint, ...]
    amplitude: Fraction

    def __post_init__(self):
        for p in self.S_A + self.S_B:
            if p.dim != self.dim:
                raise ValueError("node dimension mismatch")
        if self.S_A and self.S_B and set_dist(self.S_A, self.S_B) == 0:
            raise ValueError("S_A and S_B meet")

    @property
    def constant(self) -> Fraction | None:
        if not self.S_B:
            return Fraction(0)
        if not self.S_A:
            return self.amplitude
        return None

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "amplitude": frac_to_str(self.amplitude),
            "S_A": [p.to_json() for p in self.S_A],
            "S_B": [p.to_json() for p in self.S_B],
        }

    @classmethod
    def from_json(cls, data: dict) -> "BumpFunction":
        return cls(int(data["dim"]), tuple(TorusPoint.from_json(p) for p in data["S_A"]),
                   tuple(TorusPoint.from_json(p) for p in data["S_B"]),
                   parse_rational(data["amplitude"]))


def urysohn_eval(bump: BumpFunction, x: TorusPoint) -> Fraction:
    if x.dim != bump.dim:
        raise ValueError(f"dimension mismatch: {x.dim} vs {bump.dim}")
    const = bump.constant
    if const is not None:
        return const
    da = min(torus_dist(x, p) for p in bump.S_A)
    db = min(torus_dist(x, p) for p in bump.S_B)
    if da + db == 0:
        raise ValueError("x is at distance 0 from both node sets")
    return bump.amplitude * da / (da + db)


@dataclass(frozen=True)
class Level:
    k: int
    alpha: TorusPoint
    bump: BumpFunction
    achieved: Fraction | None  # separation of the supports, None for constant levels
    fragile: bool = False

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "alpha": self.alpha.to_json(),
            "achieved": frac_to_str(self.achieved) if self.achieved is not None else None,
            "fragile": self.fragile,
            **self.bump.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "Level":
        ach = data.get("achieved")
        return cls(int(data["k"]), TorusPoint.from_json(data["alpha"]), BumpFunction.from_json(data),
                   parse_rational(ach) if ach is not None else None, bool(data.get("fragile", False)))


@dataclass(frozen=True)
class Interpolant:
    K: int
    levels: tuple[Level, ...]
    config: dict = field(default_factory=dict, compare=False)

    def __call__(self, n: int) -> Fraction:
        return sum((urysohn_eval(lv.bump, scalar_orbit(n, lv.alpha)) for lv in self.levels), Fraction(0))

    @property
    def period(self) -> int:
        """A common period: lcm of all coordinate denominators."""
        q = 1
        for lv in self.levels:
            for c in lv.alpha.coords:
                q = math.lcm(q, c.denominator)
        return q

    def to_json(self) -> dict:
        return {
            "schema": "interpolab/interpolant@1",
            "K": self.K,
            "levels": [lv.to_json() for lv in self.levels],
            "config": self.config,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Interpolant":
        return cls(int(data["K"]), tuple(Level.from_json(lv) for lv in data["levels"]), data.get("config", {}))


def _search(A, B, floor: Fraction, candidates, nd_dim: int, budget: int, seed: int):
    """Best certificate for separating A from B at >= floor, or (None, best_seen)."""
    best = Fraction(0)
    for alpha in candidates:
        got = orbit_distance(A, B, alpha)
        if got >= floor:
            return SeparabilityCertificate(tuple(A), tuple(B), alpha, floor, got), got
        best = max(best, got)
    one = separability_1d(A, B, floor)
    if isinstance(one, SeparabilityCertificate):
        return one, one.achieved
    best = max(best, one.sup_achieved)
    if nd_dim >= 2:
        res = separability_nd(A, B, floor, d=nd_dim, budget=budget, seed=seed)
        if isinstance(res, SeparabilityCertificate):
            return res, res.achieved
        best = max(best, res.best_achieved)
    return None, best


def build_interpolant(E, b, K: int, eps_floor=DEFAULT_FLOOR, budget: int = 2000, seed: int = 0,
                      nd_dim: int = 2, candidates: Iterable[TorusPoint] = (),
                      allow_fragile: bool = False) -> Interpolant:
    """Separate the supports of each binary level and place a bump there.

    Per level, ``candidates`` are tried first, then the exact 1-D decision,
    then a d-dimensional search with ``nd_dim`` coordinates (skipped when
    ``nd_dim`` is 1).  With ``allow_fragile`` a level whose best separation is
    positive but below ``eps_floor`` is kept and flagged; otherwise
    :class:`SeparationFailed` is raised.
    """
    E = E if isinstance(E, IndexSet) else IndexSet(tuple(E))
    target = b if isinstance(b, TargetSequence) else TargetSequence(E, tuple(b))
    if target.E.elements != E.elements:
        raise ValueError("target is aligned with a different index set")
    floor = parse_rational(eps_floor)
    if not 0 < floor <= Fraction(1, 2):
        raise ValueError("eps_floor must lie in (0, 1/2]")
    candidates = list(candidates)
    levels = []
    for k, level in enumerate(binary_decompose(target, K), start=1):
        amp = Fraction(1, 1 << k)
        A = [r for r, v in zip(E, level) if v == 0]
        B = [r for r, v in zip(E, level) if v != 0]
        if not A or not B:
            alpha = TorusPoint.origin(1)
            node = (alpha,) if A or B else ()
            bump = BumpFunction(1, node if A else (), node if B else (), amp)
            levels.append(Level(k, alpha, bump, None))
            continue
        cert, best = _search(A, B, floor, candidates, nd_dim, budget, seed + k)
        fragile = False
        if cert is None:
            if not (allow_fragile and best > 0):
                raise SeparationFailed(k, A, B, best)
            cert = _fragile_certificate(A, B, nd_dim, budget, seed + k)
            fragile = True
        alpha = cert.alpha
        S_A = tuple(sorted({scalar_orbit(a, alpha) for a in A}, key=lambda p: p.coords))
        S_B = tuple(sorted({scalar_orbit(r, alpha) for r in B}, key=lambda p: p.coords))
        levels.append(Level(k, alpha, BumpFunction(alpha.dim, S_A, S_B, amp), cert.achieved, fragile))
    config = {"K": K, "eps_floor": frac_to_str(floor), "budget": budget, "seed": seed,
              "nd_dim": nd_dim, "allow_fragile": allow_fragile}
    return Interpolant(K, tuple(levels), config)


def _fragile_certificate(A, B, nd_dim, budget, seed) -> SeparabilityCertificate:
    one = separability_1d(A, B, Fraction(1, 2))
    if isinstance(one, SeparabilityCertificate):
        return one
    cert = SeparabilityCertificate(tuple(A), tuple(B), TorusPoint((one.argmax,)), one.sup_achieved,
                                   one.sup_achieved)
    if nd_dim >= 2:
        res = separability_nd(A, B, Fraction(1, 2), d=nd_dim, budget=budget, seed=seed)
        if res.best_achieved > cert.achieved:
            cert = SeparabilityCertificate(tuple(A), tuple(B), res.best_alpha, res.best_achieved,
                                           res.best_achieved)
    return cert


@dataclass(frozen=True)
class VerificationReport:
    max_error: Fraction
    errors: tuple[Fraction, ...]
    bound: Fraction
    exact: bool
    passed: bool
    node_exact: bool  # every level hits 0 / 2^-k at every node


def verify_interpolation(psi: Interpolant, E, b, K: int | None = None) -> VerificationReport:
    E = E if isinstance(E, IndexSet) else IndexSet(tuple(E))
    target = b if isinstance(b, TargetSequence) else TargetSequence(E, tuple(b))
    K = psi.K if K is None else K
    errors = tuple(abs(psi(r) - v) for r, v in zip(E, target.values))
    worst = max(errors) if errors else Fraction(0)
    bound = Fraction(1, 1 << K)
    node_exact = True
    for lv, level in zip(psi.levels, binary_decompose(target, psi.K)):
        for r, want in zip(E, level):
            if urysohn_eval(lv.bump, scalar_orbit(r, lv.alpha)) != want:
                node_exact = False
    return VerificationReport(worst, errors, bound, worst == 0, worst <= bound, node_exact)


@dataclass(frozen=True)
class PeriodReport:
    periods: tuple[int, ...]
    max_gap: int | None


def epsilon_periods(psi: Callable[[int], object], epsilon, N: int, T_max: int) -> PeriodReport:
    """All T <= T_max with max_{1<=n<=N} |psi(n+T) - psi(n)| < eps, and the largest gap.

    Gaps are measured between consecutive periods starting from 0.
    """
    eps = parse_rational(epsilon)
    values = [psi(n) for n in range(1, N + T_max + 1)]
    periods = []
    for T in range(1, T_max + 1):
        if all(abs(values[n + T] - values[n]) < eps for n in range(N)):
            periods.append(T)
    gap = None
    if periods:
        gap = max(b - a for a, b in zip([0] + periods, periods))
    return PeriodReport(tuple(periods), gap)
