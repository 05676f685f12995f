"""Separating finite integer sets by rotations of a torus.

Two finite sets A, B are (eps, d)-separable when some alpha in the d-torus
puts every a*alpha at distance >= eps from every b*alpha.  In one dimension
the distance equals min ||(a - b) alpha||, so the exact supremum over alpha
is a tent-envelope maximum (see :mod:`interpolab._tents`).
"""

from __future__ import annotations

import hashlib
import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import _tents
from .exact_arith import TorusPoint, frac_to_str, parse_rational, scalar_orbit, set_dist, torus_reduce
from .index_sets import IndexSet

__all__ = [
    "NiceReport",
    "NonSeparabilityVerdict",
    "NotFound",
    "SeparabilityCertificate",
    "Unknown",
    "critical_points",
    "nice_collections",
    "non_separable_pair_search",
    "orbit_distance",
    "separability_1d",
    "separability_nd",
]

BREAKPOINT_LIST_LIMIT = 10_000


def orbit_distance(A: Iterable[int], B: Iterable[int], alpha: TorusPoint) -> Fraction:
    """set_dist(A alpha, B alpha), evaluated exactly."""
    return set_dist([scalar_orbit(a, alpha) for a in A], [scalar_orbit(b, alpha) for b in B])


@dataclass(frozen=True)
class SeparabilityCertificate:
    A: tuple[int, ...]
    B: tuple[int, ...]
    alpha: TorusPoint
    epsilon: Fraction
    achieved: Fraction

    @property
    def dim(self) -> int:
        return self.alpha.dim

    def verify(self) -> bool:
        return self.achieved >= self.epsilon and orbit_distance(self.A, self.B, self.alpha) == self.achieved

    def to_json(self) -> dict:
        return {
            "schema": "interpolab/separability-certificate@1",
            "A": [str(a) for a in self.A],
            "B": [str(b) for b in self.B],
            "alpha": self.alpha.to_json(),
            "epsilon": frac_to_str(self.epsilon),
            "achieved": frac_to_str(self.achieved),
            "dim": self.dim,
        }

    @classmethod
    def from_json(cls, data: dict) -> "SeparabilityCertificate":
        return cls(tuple(int(a) for a in data["A"]), tuple(int(b) for b in data["B"]),
                   TorusPoint.from_json(data["alpha"]), parse_rational(data["epsilon"]),
                   parse_rational(data["achieved"]))


@dataclass(frozen=True)
class NonSeparabilityVerdict:
    """Exhaustive 1-D refutation: the exact supremum is below epsilon."""

    A: tuple[int, ...]
    B: tuple[int, ...]
    epsilon: Fraction
    sup_achieved: Fraction
    argmax: Fraction
    breakpoints: tuple[Fraction, ...] | None
    digest: str
    dim: int = 1

    def verify(self) -> bool:
        diffs = _differences(self.A, self.B)
        value, x = _tents.supmin(diffs)
        return (value == self.sup_achieved and value < self.epsilon
                and _tents.tent_min(diffs, self.argmax) == value
                and self.digest == _digest(diffs))

    def to_json(self) -> dict:
        data = {
            "schema": "interpolab/nonseparability-verdict@1",
            "A": [str(a) for a in self.A],
            "B": [str(b) for b in self.B],
            "epsilon": frac_to_str(self.epsilon),
            "sup_achieved": frac_to_str(self.sup_achieved),
            "argmax": frac_to_str(self.argmax),
            "dim": self.dim,
            "digest": self.digest,
        }
        if self.breakpoints is not None:
            data["breakpoints"] = [frac_to_str(b) for b in self.breakpoints]
        return data

    @classmethod
    def from_json(cls, data: dict) -> "NonSeparabilityVerdict":
        bps = data.get("breakpoints")
        return cls(tuple(int(a) for a in data["A"]), tuple(int(b) for b in data["B"]),
                   parse_rational(data["epsilon"]), parse_rational(data["sup_achieved"]),
                   parse_rational(data["argmax"]),
                   tuple(parse_rational(b) for b in bps) if bps is not None else None,
                   data["digest"], int(data.get("dim", 1)))


@dataclass(frozen=True)
class Unknown:
    """Inconclusive search; ``best`` is the strongest separation seen."""

    epsilon: Fraction
    best_alpha: TorusPoint | None
    best_achieved: Fraction
    evaluated: int


@dataclass(frozen=True)
class NotFound:
    examined: int
    largest_F: tuple[int, ...]


def _differences(A: Iterable[int], B: Iterable[int]) -> list[int]:
    return sorted({abs(a - b) for a in A for b in B})


def _digest(diffs: Sequence[int]) -> str:
    return hashlib.sha256(",".join(map(str, diffs)).encode()).hexdigest()


def _check_pair(A, B) -> tuple[tuple[int, ...], tuple[int, ...]]:
    A = tuple(sorted(set(int(a) for a in A)))
    B = tuple(sorted(set(int(b) for b in B)))
    if not A or not B:
        raise ValueError("A and B must be nonempty")
    common = set(A) & set(B)
    if common:
        raise ValueError(f"A and B overlap at {sorted(common)[:5]}")
    return A, B


def _tent_breakpoints(diffs: Sequence[int]) -> tuple[Fraction, ...] | None:
    if sum(2 * m for m in diffs) > BREAKPOINT_LIST_LIMIT:
        return None
    return tuple(sorted({Fraction(t, 2 * m) for m in diffs for t in range(2 * m)}))


def separability_1d(A, B, epsilon) -> SeparabilityCertificate | NonSeparabilityVerdict:
    """Decide (eps, 1)-separability exactly.

    Returns a certificate at the smallest maximiser of min ||(a-b) alpha||
    when the supremum reaches eps, otherwise an exhaustive verdict carrying
    that supremum.
    """
    A, B = _check_pair(A, B)
    eps = parse_rational(epsilon)
    if not 0 < eps <= Fraction(1, 2):
        raise ValueError("epsilon must lie in (0, 1/2]")
    diffs = _differences(A, B)
    value, x = _tents.supmin(diffs)
    if value >= eps:
        alpha = TorusPoint((x,))
        cert = SeparabilityCertificate(A, B, alpha, eps, orbit_distance(A, B, alpha))
        if cert.achieved != value:
            raise AssertionError("orbit distance disagrees with tent envelope")
        return cert
    return NonSeparabilityVerdict(A, B, eps, value, x, _tent_breakpoints(diffs), _digest(diffs))


def _pad(alpha: Sequence[Fraction], d: int) -> TorusPoint:
    coords = list(alpha)[:d] + [Fraction(0)] * (d - len(alpha))
    return TorusPoint(tuple(coords))


def _split_candidates(B: tuple[int, ...], parts: int, rng: random.Random, tries: int):
    """Ways of cutting B into ``parts`` blocks: contiguous, residues, then random."""
    n = len(B)
    if parts > n:
        parts = n
    size = math.ceil(n / parts)
    yield [B[i:i + size] for i in range(0, n, size)]
    yield [B[i::parts] for i in range(parts)]
    for _ in range(tries):
        labels = [rng.randrange(parts) for _ in B]
        blocks = [tuple(b for b, lab in zip(B, labels) if lab == k) for k in range(parts)]
        yield [blk for blk in blocks if blk]


def separability_nd(A, B, epsilon, d: int = 2, budget: int = 2000,
                    seed: int = 0) -> SeparabilityCertificate | Unknown:
    """Search for a certificate in the d-torus; sound but incomplete.

    Strategy, in order: the exact 1-D optimum padded with zeros (skipped when
    too expensive); a batch of small-denominator random points; product
    witnesses that separate A from each block of a split of B and stack the
    coordinates; seeded random rationals with growing denominators and local
    refinement of the best point.  ``budget`` bounds the number of exact
    candidate evaluations.
    """
    A, B = _check_pair(A, B)
    eps = parse_rational(epsilon)
    if d < 1:
        raise ValueError("d must be >= 1")
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    rng = random.Random(seed)
    evaluated = 0
    best: tuple[Fraction, TorusPoint | None] = (Fraction(-1), None)

    def attempt(coords) -> SeparabilityCertificate | None:
        nonlocal evaluated, best
        alpha = _pad(coords, d)
        evaluated += 1
        got = orbit_distance(A, B, alpha)
        if got > best[0]:
            best = (got, alpha)
        if got >= eps:
            return SeparabilityCertificate(A, B, alpha, eps, got)
        return None

    one_d = _quick_argmax(_differences(A, B))
    if one_d is not None:
        cert = attempt([one_d])
        if cert:
            return cert

    def random_point(qmax):
        coords = []
        for _ in range(d):
            q = rng.randint(1, qmax)
            coords.append(Fraction(rng.randrange(q), q))
        return coords

    for _ in range(min(64, budget // 4)):
        cert = attempt(random_point(64))
        if cert:
            return cert

    if d >= 2 and len(B) >= 2:
        for parts in range(2, min(d, len(B)) + 1):
            for blocks in _split_candidates(B, parts, rng, tries=8):
                if evaluated >= budget:
                    break
                coords = [_quick_argmax(_differences(A, blk)) for blk in blocks]
                if any(c is None for c in coords):
                    continue
                cert = attempt(coords)
                if cert:
                    return cert

    qmax = 8
    while evaluated < budget:
        cert = attempt(random_point(qmax))
        if cert:
            return cert
        qmax = min(qmax * 2, 1 << 20) if evaluated % 64 == 0 else qmax
        if evaluated % 32 == 0 and best[1] is not None:
            cert = _refine(best[1], attempt, rng)
            if cert:
                return cert
    return Unknown(eps, best[1], best[0], evaluated)


def _quick_argmax(diffs: list[int], nodes: int = 2000) -> Fraction | None:
    """Exact 1-D argmax when it is cheap to find, else None."""
    try:
        if _tents._enumeration_work(diffs) <= 5_000_000:
            return _tents.supmin_enumerate(diffs)[1]
        return _tents.supmin_bnb(diffs, max_nodes=nodes)[1]
    except _tents.BudgetExceeded:
        return None


def _refine(alpha: TorusPoint, attempt, rng: random.Random):
    """Nudge one coordinate to nearby rationals with slightly larger denominators."""
    coords = list(alpha.coords)
    i = rng.randrange(len(coords))
    q = coords[i].denominator
    for q2 in (q + 1, 2 * q, 2 * q + 1, 3 * q):
        centre = round(coords[i] * q2)
        for p in (centre - 1, centre + 1):
            trial = list(coords)
            trial[i] = torus_reduce(Fraction(p, q2))
            cert = attempt(trial)
            if cert:
                return cert
    return None


def _raw_critical_points(F: Sequence[int], eps: Fraction):
    """Yield (i, j, point) for every pair i<j, 2*(r_j - r_i) points each, with multiplicity."""
    for i, j in itertools.combinations(range(len(F)), 2):
        m = F[j] - F[i]
        for t in range(m):
            yield i, j, torus_reduce((t + eps) / m)
            yield i, j, torus_reduce((t - eps) / m)


def _check_critical_args(F, epsilon) -> tuple[tuple[int, ...], Fraction]:
    els = tuple(F)
    if len(els) != len(set(els)):
        raise ValueError("F has repeated elements")
    els = tuple(sorted(els))
    eps = parse_rational(epsilon)
    if not 0 < eps < Fraction(1, 2):
        raise ValueError("epsilon must lie in (0, 1/2)")
    if len(els) < 2:
        raise ValueError("need |F| >= 2")
    return els, eps


def critical_points(F, epsilon, with_multiplicity: bool = False) -> list[Fraction]:
    """Points beta with ||(r_j - r_i) beta|| = eps for some pair, sorted and deduplicated.

    With ``with_multiplicity`` the raw list (one entry per pair and solution,
    in generation order) is returned instead.
    """
    els, eps = _check_critical_args(F, epsilon)
    raw = [p for _, _, p in _raw_critical_points(els, eps)]
    if with_multiplicity:
        return raw
    return sorted(set(raw))


def critical_count_formula(F: Sequence[int]) -> int:
    els = sorted(F)
    return sum(2 * (b - a) for a, b in itertools.combinations(els, 2))


@dataclass(frozen=True)
class Region:
    left: Fraction
    right: Fraction  # may exceed 1 for the wrapping region
    representative: Fraction
    components: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class NiceReport:
    F: tuple[int, ...]
    epsilon: Fraction
    boundaries: tuple[Fraction, ...]
    regions: tuple[Region, ...] = field(repr=False)
    distinct_collections: int
    distinct_nice_sets: int
    bound: int

    @property
    def max_components(self) -> int:
        return max(len(r.components) for r in self.regions)


def _components(F: Sequence[int], alpha: Fraction, eps: Fraction) -> tuple[tuple[int, ...], ...]:
    """Connected components of F*alpha under 'circle distance < eps'."""
    n = len(F)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    pts = [torus_reduce(r * alpha) for r in F]
    for i, j in itertools.combinations(range(n), 2):
        d = abs(pts[i] - pts[j])
        if min(d, 1 - d) < eps:
            parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(F[i])
    return tuple(sorted(tuple(g) for g in groups.values()))


def nice_collections(F, epsilon) -> NiceReport:
    """Enumerate the collections of F-nice sets created by the open regions.

    One representative (an exact midpoint) per region between consecutive
    critical points.  The nice sets created there are the unions of the
    components of the '< eps' graph on F*alpha, so a collection is identified
    by its component partition.
    """
    els, eps = _check_critical_args(F, epsilon)
    bps = critical_points(els, eps)
    regions = []
    for k, left in enumerate(bps):
        right = bps[k + 1] if k + 1 < len(bps) else bps[0] + 1
        rep = torus_reduce((left + right) / 2)
        regions.append(Region(left, right, rep, _components(els, rep, eps)))
    partitions = {r.components for r in regions}
    nice_sets: set[frozenset[int]] = set()
    for comps in partitions:
        for mask in range(1 << len(comps)):
            nice_sets.add(frozenset(x for b, c in enumerate(comps) if mask >> b & 1 for x in c))
    N = len(els)
    bound = 2 ** math.ceil(1 / eps) * N * (N - 1) * els[-1]
    return NiceReport(els, eps, tuple(bps), tuple(regions), len(partitions), len(nice_sets), bound)


def non_separable_pair_search(E, epsilon, budget: int = 5000, max_F: int = 12):
    """Look for disjoint A, B inside a prefix of E refuted by :func:`separability_1d`.

    Prefixes F are tried in increasing size; within F every split into
    (A, F - A) with the smallest element in A is tested, then proper
    sub-pairs drawn from the same prefix.  ``budget`` caps exact decisions.
    """
    els = tuple(E)
    eps = parse_rational(epsilon)
    examined = 0
    largest: tuple[int, ...] = ()
    for size in range(2, min(max_F, len(els)) + 1):
        F = els[:size]
        largest = F
        newest = F[-1]
        rest = F[:-1]
        # pairs not involving the newest element were covered by smaller prefixes
        for labels in itertools.product((0, 1, 2), repeat=len(rest)):
            A = [x for x, lab in zip(rest, labels) if lab == 0]
            B = [x for x, lab in zip(rest, labels) if lab == 1]
            for side in (0, 1):
                AA = A + [newest] if side == 0 else A
                BB = B + [newest] if side == 1 else B
                if not AA or not BB or min(AA) > min(BB):
                    continue
                if examined >= budget:
                    return NotFound(examined, largest)
                examined += 1
                verdict = separability_1d(AA, BB, eps)
                if isinstance(verdict, NonSeparabilityVerdict):
                    return verdict
    return NotFound(examined, largest)
