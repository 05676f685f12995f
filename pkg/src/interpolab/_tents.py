"""Exact maximisation of g(x) = min_{m in D} ||m x|| over the circle.

Each ``||m x||`` is a tent function with slopes +-m.  ``g`` is their lower
envelope, so its local maxima sit where an increasing piece of one tent meets
a decreasing piece of another: x = j / (m1 + m2).  Two engines are provided:

* :func:`supmin_enumerate` evaluates g at every such candidate (numpy,
  integer arithmetic).  Work grows like the sum of all pairwise sums, so it
  is only used for small inputs.
* :func:`supmin_bnb` is a best-first branch and bound.  Tents are added in
  increasing frequency; on each piece where the processed tents are linear,
  their envelope is concave and its exact maximum is found by walking the
  active line.  Pieces whose envelope cannot beat the incumbent are dropped.

Both return the exact maximum and its smallest maximiser in [0, 1/2] (g is
symmetric under x -> 1 - x).
"""

from __future__ import annotations

import heapq
import itertools
import math
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

HALF = Fraction(1, 2)

_SPLIT_LIMIT = 64
_INT64_SAFE = 2**62


class BudgetExceeded(RuntimeError):
    """Raised when an exact search would exceed its work budget."""


def tent_min(D: Sequence[int], x: Fraction) -> Fraction:
    """g(x) = min over m in D of ||m x||, exactly."""
    p, q = x.numerator, x.denominator
    best = q
    for m in D:
        r = (m * p) % q
        v = r if 2 * r <= q else q - r
        if v < best:
            best = v
            if best == 0:
                break
    return Fraction(best, q)


def _normalise(D: Iterable[int]) -> list[int]:
    out = sorted({abs(int(m)) for m in D})
    if not out:
        raise ValueError("empty frequency set")
    if out[0] == 0:
        raise ValueError("frequency 0 makes g identically zero")
    return out


def supmin_enumerate(D: Iterable[int], max_work: int = 50_000_000) -> tuple[Fraction, Fraction]:
    """Brute force over all crossing candidates j/(m1+m2), 0 <= j <= (m1+m2)/2."""
    D = _normalise(D)
    g = math.gcd(*D)
    if g > 1:
        value, x = supmin_enumerate([m // g for m in D], max_work)
        return value, x / g
    work = _enumeration_work(D)
    if work > max_work:
        raise BudgetExceeded(f"enumeration needs ~{work} evaluations")
    sums = sorted({a + b for i, a in enumerate(D) for b in D[i:]})
    use_numpy = D[-1] * sums[-1] < _INT64_SAFE
    darr = np.asarray(D, dtype=np.int64)[:, None] if use_numpy else None
    best_num, best_den, best_x = -1, 1, HALF
    chunk = max(1, 2_000_000 // len(D))
    for S in sums:
        top = S // 2
        if use_numpy:
            k_best, v_best = -1, -1
            for start in range(0, top + 1, chunk):
                j = np.arange(start, min(top + 1, start + chunk), dtype=np.int64)
                r = (darr * j[None, :]) % S
                v = np.minimum(r, S - r).min(axis=0)
                k = int(np.argmax(v))
                if int(v[k]) > v_best:
                    v_best, k_best = int(v[k]), int(j[k])
        else:
            k_best, v_best = -1, -1
            for jj in range(top + 1):
                v = min(min((m * jj) % S, S - (m * jj) % S) for m in D)
                if v > v_best:
                    v_best, k_best = v, jj
        lhs, rhs = v_best * best_den, best_num * S
        x = Fraction(k_best, S)
        if lhs > rhs or (lhs == rhs and x < best_x):
            best_num, best_den, best_x = v_best, S, x
    return Fraction(best_num, best_den), best_x


def _line(m: int, lo: Fraction, hi: Fraction) -> tuple[int, int]:
    """(slope, intercept) of ||m x|| on a piece free of its breakpoints."""
    y = m * (lo + hi) / 2
    t = math.floor(y)
    if y - t < HALF:
        return (m, -t)
    return (-m, t + 1)


def _envelope_max(lines: list[tuple[int, int]], lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    """Maximum and leftmost maximiser of min(lines) on [lo, hi] (a concave function)."""

    def active(x):
        best = None
        for s, c in lines:
            v = s * x + c
            if best is None or v < best[0] or (v == best[0] and s < best[1]):
                best = (v, s, c)
        return best

    x = lo
    v, s, c = active(x)
    while s > 0:
        nxt = None
        for s2, c2 in lines:
            if s2 < s:
                xc = Fraction(c2 - c, s - s2)
                if xc > x and (nxt is None or xc < nxt):
                    nxt = xc
        if nxt is None or nxt >= hi:
            return s * hi + c, hi
        x = nxt
        v, s, c = active(x)
    return v, x


def supmin_bnb(D: Iterable[int], max_nodes: int = 300_000) -> tuple[Fraction, Fraction]:
    """Exact branch and bound; see the module docstring."""
    D = _normalise(D)
    g = math.gcd(*D)
    if g > 1:
        value, x = supmin_bnb([m // g for m in D], max_nodes)
        return value, x / g
    k = len(D)
    best = [tent_min(D, HALF), HALF]

    def consider(x: Fraction):
        v = tent_min(D, x)
        if v > best[0] or (v == best[0] and x < best[1]):
            best[0], best[1] = v, x

    def probe(x: Fraction, lo: Fraction, hi: Fraction, nxt: int):
        consider(x)
        if nxt < k:
            m2 = D[nxt]
            t = math.floor(m2 * x - HALF)
            for tt in (t, t + 1):
                p = Fraction(2 * tt + 1, 2 * m2)
                if lo <= p <= hi:
                    consider(p)

    def worth(U, xs):
        return U > best[0] or (U == best[0] and xs < best[1])

    counter = itertools.count()
    heap = [(-HALF, Fraction(0), next(counter), (Fraction(0), HALF, 0, ()))]
    nodes = 0
    while heap:
        negU, xs, _, (lo, hi, i, lines) = heapq.heappop(heap)
        if not worth(-negU, xs):
            continue
        nodes += 1
        if nodes > max_nodes:
            raise BudgetExceeded(f"branch and bound exceeded {max_nodes} nodes")
        if i == k:
            consider(xs)
            continue
        a, b = lo, hi
        for s, c in lines:
            bound = Fraction(best[0] - c, s)
            if s > 0:
                a = max(a, bound)
            else:
                b = min(b, bound)
        if a > b:
            continue
        m = D[i]
        jlo = math.floor(2 * m * a) + 1
        jhi = math.ceil(2 * m * b) - 1
        if jhi - jlo + 1 <= _SPLIT_LIMIT:
            cuts = [a] + [Fraction(j, 2 * m) for j in range(jlo, jhi + 1)] + [b]
            for p, q in zip(cuts, cuts[1:]):
                child = list(lines) + [_line(m, p, q)]
                U, x = _envelope_max(child, p, q)
                probe(x, p, q, i + 1)
                if worth(U, x):
                    heapq.heappush(heap, (-U, x, next(counter), (p, q, i + 1, tuple(child))))
        else:
            cut = Fraction((jlo + jhi) // 2, 2 * m)
            for p, q in ((a, cut), (cut, b)):
                if lines:
                    U, x = _envelope_max(list(lines), p, q)
                else:
                    U, x = HALF, p
                probe(x, p, q, i)
                if worth(U, x):
                    heapq.heappush(heap, (-U, x, next(counter), (p, q, i, lines)))
    return best[0], best[1]


def supmin(D: Iterable[int], method: str = "auto") -> tuple[Fraction, Fraction]:
    D = _normalise(D)
    if method == "enumerate":
        return supmin_enumerate(D)
    if method == "bnb":
        return supmin_bnb(D)
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    if _enumeration_work(D) <= 100_000_000:
        return supmin_enumerate(D, max_work=100_000_000)
    return supmin_bnb(D)


def _enumeration_work(D: list[int]) -> int:
    if len(D) * D[-1] > 10**7:
        return 10**18  # too large to even list the sums cheaply
    sums = {a + b for i, a in enumerate(D) for b in D[i:]}
    return sum(s // 2 + 1 for s in sums) * len(D)
