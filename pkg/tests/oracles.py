"""Slow, independent reference implementations used only by the tests.

None of these import the engines they check.
"""

import cmath
import itertools
import math
from fractions import Fraction


def circle_norm(x: Fraction) -> Fraction:
    y = x - math.floor(x)
    return min(y, 1 - y)


def grid_supmin(D):
    """max over alpha = p/q with q <= 2 max(D) of min ||m alpha||; smallest maximiser in [0, 1/2].

    Every local maximum of the tent envelope sits at a crossing j/(m1+m2),
    so this Farey grid contains the true maximiser.
    """
    D = sorted(set(D))
    Q = 2 * D[-1]
    best, arg = Fraction(-1), None
    seen = set()
    for q in range(1, Q + 1):
        for p in range(q // 2 + 1):
            x = Fraction(p, q)
            if x in seen:
                continue
            seen.add(x)
            v = min(circle_norm(m * x) for m in D)
            if v > best or (v == best and x < arg):
                best, arg = v, x
    return best, arg


def brute_longest_ap(E):
    """Length, start, gap by trying every (start, gap) and extending (cubic)."""
    els = sorted(set(E))
    members = set(els)
    best = (1, els[0], 0)
    for a in els:
        for b in els:
            if b <= a:
                continue
            gap = b - a
            length = 1
            while a + length * gap in members:
                length += 1
            cand = (length, a, gap)
            if (cand[0], -cand[2], -cand[1]) > (best[0], -best[2], -best[1]):
                best = cand
    return best


def balanced_ternary_table(width):
    """value -> digit tuple for every digit vector of the given width."""
    table = {}
    for digits in itertools.product((-1, 0, 1), repeat=width):
        value = sum(d * 3**j for j, d in enumerate(digits))
        table.setdefault(value, []).append(digits)
    return table


def binary_digits(v: Fraction, K: int):
    """First K binary digits of v in [0, 1) by repeated doubling."""
    out = []
    for _ in range(K):
        v *= 2
        bit = 1 if v >= 1 else 0
        out.append(bit)
        v -= bit
    return out


def fft_riesz_coefficients(cs):
    """Fourier coefficients of prod (1 + c_j cos(3^j t)) from samples (floats)."""
    N = len(cs)
    M = 3**N + 2
    samples = []
    for k in range(M):
        t = 2 * math.pi * k / M
        val = 1.0
        for j, c in enumerate(cs):
            val *= 1 + float(c) * math.cos(3**j * t)
        samples.append(val)

    def coef(m):
        return sum(samples[k] * cmath.exp(-2j * math.pi * m * k / M) for k in range(M)) / M

    return coef


def alpha_prefix(digits: int) -> Fraction:
    """sum of 2^-(k^2) over k^2 <= digits."""
    total = Fraction(0)
    k = 1
    while k * k <= digits:
        total += Fraction(1, 2 ** (k * k))
        k += 1
    return total


def scan_fast_lacunary(ell: Fraction, N: int):
    """Linear scan for the greedy sequence (integer arithmetic only)."""
    K = 1 / ell + 1
    p, q = K.numerator, K.denominator
    out = []
    s = 0
    for n in range(1, N + 1):
        s += 1
        while True:
            cond1 = q * s * s > p * (2 * n * s + n * n)
            cond2 = True
            if out:
                cond2 = q * (2 * n * s + n * n) > p * out[-1] ** 2
            if cond1 and cond2:
                break
            s += 1
        out.append(s)
    return out
