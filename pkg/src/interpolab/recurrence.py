"""Finite-evidence Bohr recurrence: thresholds, greedy partitions, orbits.

Every verdict here concerns a finite prefix and a one-dimensional schedule;
nothing is claimed about the infinite set beyond the stated evidence.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import _tents
from .exact_arith import CircleInterval, TorusPoint, frac_to_str, parse_rational, torus_reduce
from .index_sets import IndexSet

__all__ = [
    "DyadicOrbit",
    "NotReached",
    "PartitionTrace",
    "Stage",
    "SupMinResult",
    "Threshold",
    "doubling_orbit",
    "orbit_csv",
    "partition_bohr",
    "recurrence_threshold",
    "supmin_1d",
    "supmin_lower_bound",
    "truncated_alpha",
    "WeylReport",
    "weyl_sum",
]


@dataclass(frozen=True)
class SupMinResult:
    """sup over alpha of min_{r in R} ||r alpha||, with a maximiser."""

    value: Fraction
    argmax: TorusPoint
    dim: int = 1
    exact: bool = True

    def to_json(self) -> dict:
        return {"value": frac_to_str(self.value), "argmax": self.argmax.to_json(),
                "dim": self.dim, "exact": self.exact}

    @classmethod
    def from_json(cls, data: dict) -> "SupMinResult":
        return cls(parse_rational(data["value"]), TorusPoint.from_json(data["argmax"]),
                   int(data["dim"]), bool(data.get("exact", True)))


def supmin_1d(R: Iterable[int], method: str = "auto") -> SupMinResult:
    """Exact maximum of min_{r in R} ||r alpha|| over the circle.

    The returned argmax is the smallest maximiser in [0, 1/2].
    """
    R = list(R)
    if not R:
        raise ValueError("supmin_1d of an empty set")
    value, x = _tents.supmin(R, method)
    return SupMinResult(value, TorusPoint((x,)))


def supmin_lower_bound(R: Iterable[int], d: int, samples: int = 1000, seed: int = 0) -> SupMinResult:
    """Randomised lower bound in d >= 2: only "sup >= value" is asserted."""
    R = list(R)
    if not R:
        raise ValueError("empty set")
    rng = random.Random(seed)
    best = (Fraction(-1), TorusPoint.origin(d))
    for _ in range(samples):
        coords = []
        for _ in range(d):
            q = rng.randint(2, 1 << 12)
            coords.append(Fraction(rng.randrange(q), q))
        alpha = TorusPoint(tuple(coords))
        v = min(max(_norm(r * c) for c in coords) for r in R)
        if v > best[0]:
            best = (v, alpha)
    return SupMinResult(best[0], best[1], d, exact=False)


def _norm(x: Fraction) -> Fraction:
    y = torus_reduce(x)
    return min(y, 1 - y)


@dataclass(frozen=True)
class Threshold:
    """R intersected with [N] already has supmin < epsilon; N is minimal."""

    N: int
    prefix_len: int
    certificate: SupMinResult
    epsilon: Fraction


@dataclass(frozen=True)
class NotReached:
    prefix_len: int
    final_sup: SupMinResult | None
    epsilon: Fraction


def _check_eps(epsilon) -> Fraction:
    eps = parse_rational(epsilon)
    if not 0 < eps <= 1:
        raise ValueError("epsilon must lie in (0, 1]")
    return eps


def recurrence_threshold(R, epsilon) -> Threshold | NotReached:
    """Smallest N with supmin_1d(R & [N]) < epsilon (strict), over the given prefix.

    Since enlarging the set can only lower the supmin, prefix lengths are
    probed by galloping and then bisection, so only O(log n) supmin
    computations are made.  Epsilon up to 1 is accepted: any epsilon > 1/2 is
    met by the first element.
    """
    els = list(R)
    eps = _check_eps(epsilon)
    if not els:
        return NotReached(0, None, eps)
    cache: dict[int, SupMinResult] = {}

    def sup(k: int) -> SupMinResult:
        if k not in cache:
            cache[k] = supmin_1d(els[:k])
        return cache[k]

    n = len(els)
    lo, hi = 0, 1  # sup(lo) >= eps is known for lo >= 1
    while sup(hi).value >= eps:
        if hi == n:
            return NotReached(n, sup(n), eps)
        lo, hi = hi, min(2 * hi, n)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if sup(mid).value < eps:
            hi = mid
        else:
            lo = mid
    return Threshold(els[hi - 1], hi, sup(hi), eps)


@dataclass(frozen=True)
class Stage:
    epsilon: Fraction
    A: IndexSet
    B: IndexSet
    N_A: int
    N_B: int
    cert_A: SupMinResult
    cert_B: SupMinResult

    def to_json(self) -> dict:
        return {
            "epsilon": frac_to_str(self.epsilon),
            "dim": 1,
            "A": self.A.to_json(), "B": self.B.to_json(),
            "N_A": str(self.N_A), "N_B": str(self.N_B),
            "cert_A": self.cert_A.to_json(), "cert_B": self.cert_B.to_json(),
        }


@dataclass(frozen=True)
class PartitionTrace:
    R: IndexSet
    schedule: tuple[Fraction, ...]
    stages: tuple[Stage, ...]
    residual: IndexSet
    stopped_at: int | None  # index into schedule where a threshold was not reached

    @property
    def completed(self) -> bool:
        return self.stopped_at is None

    @property
    def A(self) -> IndexSet:
        return IndexSet.of([x for s in self.stages for x in s.A])

    @property
    def B(self) -> IndexSet:
        return IndexSet.of([x for s in self.stages for x in s.B])

    def check(self) -> bool:
        """Disjoint reconstruction of R plus exact re-verification of each stage."""
        pieces = [x for s in self.stages for x in (*s.A, *s.B)] + list(self.residual)
        if sorted(pieces) != list(self.R) or len(set(pieces)) != len(pieces):
            return False
        for s in self.stages:
            for block, cert in ((s.A, s.cert_A), (s.B, s.cert_B)):
                if not cert.value < s.epsilon:
                    return False
                if _tents.tent_min(list(block), cert.argmax.coords[0]) != cert.value:
                    return False
                if supmin_1d(block).value != cert.value:
                    return False
        return True

    def to_json(self) -> dict:
        return {
            "schema": "interpolab/partition-trace@1",
            "R": self.R.to_json(),
            "schedule": [{"dim": 1, "epsilon": frac_to_str(e)} for e in self.schedule],
            "stages": [s.to_json() for s in self.stages],
            "residual": self.residual.to_json(),
            "stopped_at": self.stopped_at,
        }


def partition_bohr(R: IndexSet, schedule: Sequence) -> PartitionTrace:
    """Greedy peeling: A_k is the shortest head of the residual with supmin < eps_k,
    then B_k likewise from what is left; continue with the next epsilon.
    """
    if not schedule:
        raise ValueError("empty schedule")
    R = R if isinstance(R, IndexSet) else IndexSet.of(R)
    epsilons = tuple(_check_eps(e) for e in schedule)
    residual = list(R)
    stages = []
    stopped = None
    for k, eps in enumerate(epsilons):
        ta = recurrence_threshold(residual, eps)
        if isinstance(ta, NotReached):
            stopped = k
            break
        A, rest = residual[:ta.prefix_len], residual[ta.prefix_len:]
        tb = recurrence_threshold(rest, eps)
        if isinstance(tb, NotReached):
            stopped = k
            break
        B, residual = rest[:tb.prefix_len], rest[tb.prefix_len:]
        stages.append(Stage(eps, IndexSet(tuple(A)), IndexSet(tuple(B)), ta.N, tb.N,
                            ta.certificate, tb.certificate))
    return PartitionTrace(R, epsilons, tuple(stages), IndexSet(tuple(residual)), stopped)


# -- the doubling orbit of sum 2^(-k^2) -------------------------------------


@dataclass(frozen=True)
class DyadicOrbit:
    """Truncation of 2^n alpha mod 1: the true value lies in (value, value + error)."""

    n: int
    value: Fraction
    error: Fraction

    def value_str(self) -> str:
        k = self.value.denominator.bit_length() - 1
        return f"{self.value.numerator}/2^{k}"


def _is_square(p: int) -> bool:
    return p >= 0 and math.isqrt(p) ** 2 == p


def _shifted(n: int, digits: int) -> DyadicOrbit:
    """Digits n+1 .. n+digits of alpha, with a bound on the discarded tail."""
    num = 0
    for p in range(n + 1, n + digits + 1):
        num = 2 * num + _is_square(p)
    value = Fraction(num, 1 << digits)
    s = math.isqrt(n + digits) + 1
    # tail = sum over squares q >= s^2 of 2^-(q-n) < 2 * 2^-(s^2-n)
    error = Fraction(2, 1 << (s * s - n))
    return DyadicOrbit(n, value, error)


def doubling_orbit(n_max: int, forbidden: CircleInterval | None = None,
                   n_min: int = 0, digits: int | None = None) -> list[tuple[int, DyadicOrbit, str]]:
    """Certified position of 2^n alpha mod 1 relative to an arc, alpha = sum 2^(-k^2).

    Verdict "outside" means the whole error interval misses the arc and
    "inside" means it lies within it.  When neither holds the precision is
    doubled.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if forbidden is None:
        forbidden = CircleInterval(Fraction(3, 4), Fraction(1), True, False)
    L = digits if digits is not None else n_max * n_max + 64
    out = []
    for n in range(n_min, n_max + 1):
        width = L
        while True:
            orb = _shifted(n, width)
            lo, hi = orb.value, orb.value + orb.error
            if not forbidden.intersects_segment(lo, hi):
                verdict = "outside"
                break
            if forbidden.contains_segment(lo, hi):
                verdict = "inside"
                break
            width *= 2
            if width > 1 << 20:
                raise RuntimeError(f"guard digits exhausted at n={n}")
        out.append((n, orb, verdict))
    return out


def orbit_csv(rows) -> str:
    lines = ["n,value,verdict"]
    for n, orb, verdict in rows:
        lines.append(f"{n},{orb.value_str()},{verdict}")
    return "\n".join(lines) + "\n"


def truncated_alpha(digits: int) -> Fraction:
    """sum 2^(-k^2) over k^2 <= digits."""
    return _shifted(0, digits).value


# -- equidistribution diagnostics --------------------------------------------


@dataclass(frozen=True)
class WeylReport:
    N: int
    magnitude: float
    histogram: tuple[int, ...]


def weyl_sum(E: Iterable[int], alpha, bins: int = 10) -> WeylReport:
    """|1/N sum e(s alpha)| and a histogram of the exact fractional parts."""
    if isinstance(alpha, TorusPoint):
        if alpha.dim != 1:
            raise ValueError("weyl_sum expects a one-dimensional alpha")
        alpha = alpha.coords[0]
    alpha = parse_rational(alpha)
    els = list(E)
    if not els:
        raise ValueError("weyl_sum of an empty set")
    hist = [0] * bins
    re_parts, im_parts = [], []
    p, q = alpha.numerator, alpha.denominator
    for s in els:
        r = (s * p) % q
        hist[r * bins // q] += 1
        z = cmath.exp(2j * math.pi * float(Fraction(r, q)))
        re_parts.append(z.real)
        im_parts.append(z.imag)
    N = len(els)
    mag = abs(complex(math.fsum(re_parts), math.fsum(im_parts))) / N
    return WeylReport(N, mag, tuple(hist))
