"""Finite integer sequences: generators, lacunarity, differences, progressions."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterator, NamedTuple, Sequence

from .exact_arith import parse_rational

__all__ = [
    "DensityEvidence",
    "Differences",
    "GeneratorSpec",
    "IndexSet",
    "denser_than_lacunary_evidence",
    "difference_set",
    "generate",
    "lacunary_ratio",
    "longest_ap",
]


@dataclass(frozen=True)
class IndexSet:
    """Strictly increasing tuple of positive integers.

    ``provenance`` is optional and, when present, holds one label per element
    naming the generator branch (or branches, joined by ``|``) it came from.
    """

    elements: tuple[int, ...]
    tag: str | None = None
    provenance: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        els = tuple(int(e) for e in self.elements)
        object.__setattr__(self, "elements", els)
        for a, b in zip(els, els[1:]):
            if not a < b:
                raise ValueError(f"IndexSet not strictly increasing at {a}, {b}")
        if els and els[0] < 1:
            raise ValueError("IndexSet elements must be >= 1")
        if self.provenance is not None and len(self.provenance) != len(els):
            raise ValueError("provenance length mismatch")

    @classmethod
    def of(cls, values, tag: str | None = None) -> "IndexSet":
        """Sorted, deduplicated set from any iterable of positive integers."""
        return cls(tuple(sorted(set(int(v) for v in values))), tag)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def __getitem__(self, i):
        return self.elements[i]

    def __contains__(self, x) -> bool:
        return x in self.as_set()

    def as_set(self) -> frozenset[int]:
        s = self.__dict__.get("_set")
        if s is None:
            s = frozenset(self.elements)
            object.__setattr__(self, "_set", s)
        return s

    def prefix(self, n: int) -> "IndexSet":
        prov = self.provenance[:n] if self.provenance is not None else None
        return IndexSet(self.elements[:n], self.tag, prov)

    def upto(self, bound: int) -> "IndexSet":
        """Elements <= bound, i.e. the set intersected with [bound]."""
        import bisect
        return self.prefix(bisect.bisect_right(self.elements, bound))

    def minus(self, other) -> "IndexSet":
        drop = set(other)
        return IndexSet(tuple(e for e in self.elements if e not in drop), self.tag)

    def to_json(self) -> dict:
        data: dict[str, Any] = {"elements": [str(e) for e in self.elements], "tag": self.tag or ""}
        if self.provenance is not None:
            data["provenance"] = list(self.provenance)
        return data

    @classmethod
    def from_json(cls, data: dict) -> "IndexSet":
        prov = data.get("provenance")
        return cls(tuple(int(s) for s in data["elements"]), data.get("tag") or None,
                   tuple(prov) if prov is not None else None)


@dataclass(frozen=True)
class GeneratorSpec:
    """A named generator family with its parameters.

    Families:

    ``power``        base**n + a*n + b  (params: base, a=0, b=0, start=1)
    ``polynomial``   sum c_i n**i with rational c_i (params: coeffs, start=1)
    ``grow``         3**(n*n) + 3**j for (n-1)**2 <= j <= n*n, n >= 1
    ``ap_blocks``    blocks {y_k, 2 y_k, ..., k y_k} with y_k = base**k * k! (params: base=2)
    ``explicit``     a given list (params: elements)
    ``union``        sorted merge of sub-generators (params: parts)
    """

    family: str
    params: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        params = dict(self.params)
        if "parts" in params:
            params["parts"] = [p.to_json() if isinstance(p, GeneratorSpec) else p
                               for p in params["parts"]]
        if "coeffs" in params:
            params["coeffs"] = [str(parse_rational(c)) for c in params["coeffs"]]
        return {"family": self.family, "params": params}

    @classmethod
    def from_json(cls, data: dict) -> "GeneratorSpec":
        params = dict(data.get("params", {}))
        if "parts" in params:
            params["parts"] = [cls.from_json(p) for p in params["parts"]]
        return cls(data["family"], params)

    def describe(self) -> str:
        p = self.params
        if self.family == "power":
            s = f"{p.get('base', 2)}^n"
            a, b = int(p.get("a", 0)), int(p.get("b", 0))
            if a:
                s += f"{a:+d}n"
            if b:
                s += f"{b:+d}"
            return s
        if self.family == "union":
            return "union(" + ", ".join(q.describe() for q in p["parts"]) + ")"
        if self.family == "polynomial":
            return "poly(" + ",".join(str(c) for c in p["coeffs"]) + ")"
        return self.family


def power(base: int = 2, a: int = 0, b: int = 0) -> GeneratorSpec:
    return GeneratorSpec("power", {"base": base, "a": a, "b": b})


def polynomial(*coeffs) -> GeneratorSpec:
    return GeneratorSpec("polynomial", {"coeffs": list(coeffs)})


def union(*parts: GeneratorSpec) -> GeneratorSpec:
    return GeneratorSpec("union", {"parts": list(parts)})


def _stream(spec: GeneratorSpec) -> Iterator[int]:
    """Yield the values of a family in generation order (before validation)."""
    p = spec.params
    fam = spec.family
    if fam == "power":
        base, a, b = int(p.get("base", 2)), int(p.get("a", 0)), int(p.get("b", 0))
        if base < 2:
            raise ValueError("power family needs base >= 2")
        n = int(p.get("start", 1))
        while True:
            yield base**n + a * n + b
            n += 1
    elif fam == "polynomial":
        coeffs = [parse_rational(c) for c in p["coeffs"]]
        n = int(p.get("start", 1))
        while True:
            v = sum(c * n**i for i, c in enumerate(coeffs))
            if v.denominator != 1:
                raise ValueError(f"polynomial not integer-valued at n={n}: {v}")
            yield int(v)
            n += 1
    elif fam == "grow":
        n = 1
        while True:
            top = 3 ** (n * n)
            for j in range((n - 1) ** 2, n * n + 1):
                yield top + 3**j
            n += 1
    elif fam == "ap_blocks":
        base = int(p.get("base", 2))
        k = 1
        while True:
            y = base**k * math.factorial(k)
            for i in range(1, k + 1):
                yield i * y
            k += 1
    elif fam == "explicit":
        yield from (int(v) for v in p["elements"])
    else:
        raise ValueError(f"unknown generator family {fam!r}")


def _checked(spec: GeneratorSpec) -> Iterator[int]:
    prev = 0
    for v in _stream(spec):
        if v <= prev:
            raise ValueError(f"{spec.describe()}: output {v} not positive/increasing after {prev}")
        prev = v
        yield v


def generate(spec: GeneratorSpec, N: int) -> IndexSet:
    """The first N elements of the family (after merge/dedup for unions)."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if spec.family != "union":
        out = []
        for v in _checked(spec):
            out.append(v)
            if len(out) == N:
                break
        return IndexSet(tuple(out), spec.describe())

    parts = spec.params["parts"]
    labels = [q.describe() for q in parts]
    heap = []
    iters = [_checked(q) for q in parts]
    for i, it in enumerate(iters):
        v = next(it, None)
        if v is not None:
            heap.append((v, i))
    heapq.heapify(heap)
    elements: list[int] = []
    prov: list[str] = []
    while heap and len(elements) < N:
        v, i = heapq.heappop(heap)
        srcs = [labels[i]]
        nxt = next(iters[i], None)
        if nxt is not None:
            heapq.heappush(heap, (nxt, i))
        while heap and heap[0][0] == v:
            _, j = heapq.heappop(heap)
            srcs.append(labels[j])
            nxt = next(iters[j], None)
            if nxt is not None:
                heapq.heappush(heap, (nxt, j))
        elements.append(v)
        prov.append("|".join(sorted(srcs, key=labels.index)))
    return IndexSet(tuple(elements), spec.describe(), tuple(prov))


def lacunary_ratio(E: IndexSet) -> Fraction:
    if len(E) < 2:
        raise ValueError("lacunary_ratio needs at least two elements")
    return min(Fraction(b, a) for a, b in zip(E.elements, E.elements[1:]))


class Differences(NamedTuple):
    values: IndexSet
    truncated: bool


def difference_set(A: Sequence[int], B: Sequence[int], cap: int | None = None) -> Differences:
    """Positive values of a - b (a in A, b in B), sorted; at most ``cap`` smallest kept."""
    diffs = sorted({a - b for a in A for b in B if a > b})
    truncated = cap is not None and len(diffs) > cap
    if truncated:
        diffs = diffs[:cap]
    return Differences(IndexSet(tuple(diffs), "difference"), truncated)


def longest_ap(E: Sequence[int]) -> tuple[int, int, int]:
    """(length, start, gap) of a longest progression inside E.

    Ties go to the smallest gap, then the smallest start.  A singleton gives
    ``(1, e, 0)``.
    """
    els = sorted(set(E))
    if not els:
        raise ValueError("longest_ap of an empty set")
    members = set(els)
    best_key = None
    for i, a in enumerate(els):
        for b in els[i + 1:]:
            gap = b - a
            if a - gap in members:
                continue  # a longer progression starts earlier
            length = 2
            x = b + gap
            while x in members:
                length += 1
                x += gap
            key = (-length, gap, a)
            if best_key is None or key < best_key:
                best_key = key
    if best_key is None:
        return (1, els[0], 0)
    return (-best_key[0], best_key[2], best_key[1])


@dataclass(frozen=True)
class DensityEvidence:
    """Ratios r_n / q**n over a finite prefix (evidence, not a verdict)."""

    q: Fraction
    ratios: tuple[Fraction, ...]
    nonincreasing_from: int | None  # 1-based n after which ratios never increase
    strictly_increasing: bool


def denser_than_lacunary_evidence(E: IndexSet, q) -> DensityEvidence:
    q = parse_rational(q)
    if q <= 1:
        raise ValueError("comparison ratio q must exceed 1")
    if len(E) < 2:
        raise ValueError("need at least two elements")
    ratios = tuple(Fraction(r) / q**n for n, r in enumerate(E.elements, start=1))
    last_up = 0
    for n in range(1, len(ratios)):
        if ratios[n] > ratios[n - 1]:
            last_up = n
    nonincr = last_up + 1 if last_up < len(ratios) - 1 else None
    incr = all(b > a for a, b in zip(ratios, ratios[1:]))
    return DensityEvidence(q, ratios, nonincr, incr)
