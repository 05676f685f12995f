"""Exact arithmetic on the circle and on finite-dimensional tori.

Rationals are :class:`fractions.Fraction`; Python integers are already
arbitrary precision.  Points of the torus are tuples of reduced rationals and
distances use the max over coordinates of the circle distance.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "CircleInterval",
    "TorusPoint",
    "circle_dist",
    "frac_to_str",
    "norm_to_zero",
    "parse_rational",
    "scalar_orbit",
    "set_dist",
    "torus_dist",
    "torus_reduce",
]

HALF = Fraction(1, 2)

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``.  Decimal strings are rejected on purpose."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    m = _RATIONAL_RE.match(str(text))
    if m is None:
        raise ValueError(f"not an exact rational 'p/q': {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def frac_to_str(q: Fraction | int) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def torus_reduce(q: Fraction | int) -> Fraction:
    q = Fraction(q)
    return q - math.floor(q)


def circle_dist(x: Fraction, y: Fraction) -> Fraction:
    d = abs(torus_reduce(x) - torus_reduce(y))
    return min(d, 1 - d)


@dataclass(frozen=True)
class TorusPoint:
    """A rational point of the d-torus with coordinates in [0, 1)."""

    coords: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coords) < 1:
            raise ValueError("TorusPoint needs at least one coordinate")
        for c in self.coords:
            if not isinstance(c, Fraction):
                raise TypeError(f"coordinate {c!r} is not a Fraction")
            if not 0 <= c < 1:
                raise ValueError(f"coordinate {c} not reduced into [0, 1)")

    @classmethod
    def of(cls, *values) -> "TorusPoint":
        """Build a point from arbitrary rationals, reducing each mod 1."""
        if len(values) == 1 and isinstance(values[0], (list, tuple)):
            values = tuple(values[0])
        return cls(tuple(torus_reduce(parse_rational(v)) for v in values))

    @classmethod
    def origin(cls, dim: int = 1) -> "TorusPoint":
        return cls((Fraction(0),) * dim)

    @property
    def dim(self) -> int:
        return len(self.coords)

    def to_json(self) -> list[str]:
        return [frac_to_str(c) for c in self.coords]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> "TorusPoint":
        return cls.of(*[parse_rational(s) for s in data])

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


def torus_dist(x: TorusPoint, y: TorusPoint) -> Fraction:
    if x.dim != y.dim:
        raise ValueError(f"dimension mismatch: {x.dim} vs {y.dim}")
    return max(circle_dist(a, b) for a, b in zip(x.coords, y.coords))


def set_dist(X: Iterable[TorusPoint], Y: Iterable[TorusPoint]) -> Fraction:
    X, Y = list(X), list(Y)
    if not X or not Y:
        raise ValueError("set_dist of an empty set")
    return min(torus_dist(x, y) for x in X for y in Y)


def scalar_orbit(r: int, alpha: TorusPoint) -> TorusPoint:
    """The point r*alpha, reduced coordinate-wise."""
    if r < 0:
        raise ValueError("scalar_orbit expects r >= 0")
    out = []
    for c in alpha.coords:
        # reduce the numerator first so huge r never builds a huge Fraction
        out.append(Fraction((r * c.numerator) % c.denominator, c.denominator))
    return TorusPoint(tuple(out))


def norm_to_zero(x: TorusPoint) -> Fraction:
    return torus_dist(x, TorusPoint.origin(x.dim))


@dataclass(frozen=True)
class CircleInterval:
    """An arc of the circle from ``left`` counterclockwise to ``right``.

    ``left`` is stored reduced into [0, 1) and ``right`` satisfies
    ``left <= right <= left + 1``, so a wrapping arc such as [3/4, 5/4)
    keeps its length.  Endpoint closure is tracked separately.
    """

    left: Fraction
    right: Fraction
    closed_left: bool = True
    closed_right: bool = False

    def __post_init__(self):
        left = Fraction(self.left)
        right = Fraction(self.right)
        length = right - left
        if not 0 <= length <= 1:
            raise ValueError(f"arc length {length} outside [0, 1]")
        shift = math.floor(left)
        object.__setattr__(self, "left", left - shift)
        object.__setattr__(self, "right", right - shift)

    @classmethod
    def open(cls, left, right) -> "CircleInterval":
        return cls(Fraction(left), Fraction(right), False, False)

    @classmethod
    def full(cls) -> "CircleInterval":
        return cls(Fraction(0), Fraction(1), True, False)

    @property
    def length(self) -> Fraction:
        return self.right - self.left

    @property
    def midpoint(self) -> Fraction:
        return torus_reduce((self.left + self.right) / 2)

    def contains(self, x: Fraction) -> bool:
        y = torus_reduce(Fraction(x) - self.left)
        L = self.length
        if y == 0:
            if L == 1:
                return self.closed_left or self.closed_right
            return self.closed_left and (L > 0 or self.closed_right)
        if y < L:
            return True
        if y == L:
            return self.closed_right
        return False

    def intersects_segment(self, lo: Fraction, hi: Fraction) -> bool:
        """Whether the closed real segment [lo, hi] (length < 1) meets the arc mod 1."""
        w = hi - lo
        if not 0 <= w < 1:
            raise ValueError("segment must have length in [0, 1)")
        if self.contains(lo):
            return True
        u = torus_reduce(self.left - lo)  # offset of the arc start from lo
        if u < w:
            return self.length > 0 or self.closed_left
        if u == w:
            return self.closed_left
        return False

    def contains_segment(self, lo: Fraction, hi: Fraction) -> bool:
        """Whether every point of the closed segment [lo, hi] lies in the arc."""
        w = hi - lo
        if not 0 <= w < 1:
            raise ValueError("segment must have length in [0, 1)")
        if self.length == 1:
            if self.closed_left or self.closed_right:
                return True
            hole = CircleInterval(self.left, self.left, True, True)
            return not hole.intersects_segment(lo, hi)
        if not self.contains(lo):
            return False
        end = torus_reduce(lo - self.left) + w
        if end < self.length:
            return True
        return end == self.length and self.closed_right

    def to_json(self) -> dict:
        return {
            "left": frac_to_str(self.left),
            "right": frac_to_str(self.right),
            "closed_left": self.closed_left,
            "closed_right": self.closed_right,
        }

    @classmethod
    def from_json(cls, data: dict) -> "CircleInterval":
        return cls(parse_rational(data["left"]), parse_rational(data["right"]),
                   bool(data["closed_left"]), bool(data["closed_right"]))
