"""Closed forms for one-dimensional supports on the half-line ``[0, inf)``.

Indices are 0-based: ``alphas[0]`` is the smallest exponent.
"""
from __future__ import annotations

import math
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

import mpmath

from . import exact as ex
from .certify import DEFAULT_TOL, Signomial, Status, sage_membership
from .circuits import Circuit, Support
from .polyhedra import HPolyhedron

HALF_LINE = HPolyhedron([[-1]], [0])


class ExtremeRatioError(ValueError):
    """The coefficient ratio is below the weight ratio, so the generator is not extreme."""


class ExtremeType(str, Enum):
    TYPE1 = "TYPE1"
    TYPE2 = "TYPE2"
    TYPE3 = "TYPE3"
    NOT_EXTREME = "NOT_EXTREME"
    NOT_MEMBER = "NOT_MEMBER"


class SortedAlphas(tuple):
    """Strictly increasing rational exponents."""

    def __new__(cls, alphas: Sequence):
        vals = ex.vector(alphas)
        if not vals:
            raise ValueError("need at least one exponent")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise ValueError("exponents must be strictly increasing")
        return super().__new__(cls, vals)

    @property
    def m(self) -> int:
        return len(self)

    def support(self) -> Support:
        return Support([[a] for a in self])


def _three_point(a: SortedAlphas, i: int, j: int, k: int) -> Circuit:
    """Circuit on ``i < j < k`` with negative entry at the middle point."""
    span = a[k] - a[i]
    lam = [Fraction(0)] * a.m
    lam[i] = (a[k] - a[j]) / span
    lam[k] = (a[j] - a[i]) / span
    lam[j] = Fraction(-1)
    return Circuit(lam, j, 0)


def _two_point(m: int, j: int, k: int) -> Circuit:
    lam = [Fraction(0)] * m
    lam[j], lam[k] = Fraction(-1), Fraction(1)
    return Circuit(lam, j, 0)


def _ordered(cs):
    return sorted(cs, key=lambda c: (c.beta, c.lam))


def univariate_circuits(a: SortedAlphas) -> list[Circuit]:
    """All ``C(m,2) + C(m,3)`` half-line circuits."""
    a = SortedAlphas(a)
    m = a.m
    out = [_two_point(m, j, k) for j in range(m) for k in range(j + 1, m)]
    out += [_three_point(a, i, j, k) for i in range(m) for j in range(i + 1, m) for k in range(j + 1, m)]
    return _ordered(out)


def univariate_reduced(a: SortedAlphas) -> list[Circuit]:
    """The ``m - 1`` reduced half-line circuits."""
    a = SortedAlphas(a)
    if a.m < 2:
        return []
    out = [_two_point(a.m, 0, 1)]
    out += [_three_point(a, i - 1, i, i + 1) for i in range(1, a.m - 1)]
    return _ordered(out)


def _nth_root(n: int, k: int) -> Optional[int]:
    """Exact integer ``k``-th root of ``n >= 0``, or None."""
    if n < 0:
        return None
    if n < 2:
        return n
    r = int(round(n ** (1.0 / k))) if n.bit_length() < 1000 else 1 << (n.bit_length() // k)
    # Newton refinement for large inputs
    while True:
        nxt = ((k - 1) * r + n // r ** (k - 1)) // k
        if nxt >= r:
            break
        r = nxt
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand ** k == n:
            return cand
    return None


def rational_power(x: Fraction, e: Fraction) -> Optional[Fraction]:
    """``x ** e`` when it is rational, else None (``x > 0``)."""
    p, q = e.numerator, e.denominator
    num = _nth_root(x.numerator, q)
    den = _nth_root(x.denominator, q)
    if num is None or den is None:
        return None
    return Fraction(num, den) ** p


def _mp(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def _weights(a: SortedAlphas, i: int) -> tuple[Fraction, Fraction]:
    span = a[i + 1] - a[i - 1]
    return (a[i + 1] - a[i]) / span, (a[i] - a[i - 1]) / span


def extreme_generator(a: SortedAlphas, i: int, c_lo, c_hi) -> Signomial:
    """Boundary three-term signomial centred at interior index ``i``.

    Raises :class:`ExtremeRatioError` when ``c_lo / c_hi`` is below the
    weight ratio; such signomials are strictly positive on the half-line.
    """
    a = SortedAlphas(a)
    if not 1 <= i <= a.m - 2:
        raise IndexError(f"interior index must lie in [1, {a.m - 2}]")
    w_lo, w_hi = _weights(a, i)
    exact_in = not isinstance(c_lo, float) and not isinstance(c_hi, float)
    lo = ex.to_fraction(c_lo) if exact_in else float(c_lo)
    hi = ex.to_fraction(c_hi) if exact_in else float(c_hi)
    if lo <= 0 or hi <= 0:
        raise ValueError("outer coefficients must be positive")
    if lo * w_hi < w_lo * hi:
        raise ExtremeRatioError(
            f"c_lo/c_hi = {float(lo / hi):.6g} is below the weight ratio {float(w_lo / w_hi):.6g}")
    mid = None
    if exact_in:
        # w_lo = p/q and w_hi = (q-p)/q, so the product is a q-th root
        q, p = w_lo.denominator, w_lo.numerator
        root = rational_power((lo / w_lo) ** p * (hi / w_hi) ** (q - p), Fraction(1, q))
        if root is not None:
            mid = -root
    if mid is None:
        with mpmath.workdps(40):
            lo_m, hi_m, wl, wh = (_mp(v) for v in (lo, hi, w_lo, w_hi))
            mid = -float((lo_m / wl) ** wl * (hi_m / wh) ** wh)
    coeffs = [Fraction(0) if exact_in else 0.0] * a.m
    coeffs[i - 1], coeffs[i], coeffs[i + 1] = lo, mid, hi
    return Signomial(a.support(), coeffs)


def minimizer(a: SortedAlphas, i: int, c_lo, c_hi) -> float:
    """Critical point of the boundary three-term signomial centred at ``i``."""
    w_lo, w_hi = _weights(a, i)
    return math.log(float(c_lo * w_hi) / float(c_hi * w_lo)) / float(a[i + 1] - a[i - 1])


_EXACT_POWER_LIMIT = 64


def _type3_identity(c: Sequence, w_lo: Fraction, w_hi: Fraction, i: int, tol: float) -> bool:
    lo, mid, hi = c[i - 1], c[i], c[i + 1]
    if all(isinstance(v, Fraction) for v in (lo, mid, hi)):
        q = w_lo.denominator  # w_lo + w_hi == 1, so both share this denominator
        if q <= _EXACT_POWER_LIMIT:
            lhs = (-mid) ** q
            rhs = (lo / w_lo) ** w_lo.numerator * (hi / w_hi) ** (q - w_lo.numerator)
            return lhs == rhs
    with mpmath.workdps(40):
        lhs = mpmath.log(-_mp(mid))
        rhs = _mp(w_lo) * mpmath.log(_mp(lo) / _mp(w_lo)) + _mp(w_hi) * mpmath.log(_mp(hi) / _mp(w_hi))
        return abs(float(lhs - rhs)) <= tol


def classify_extreme(f: Signomial, a: SortedAlphas, *, tol: float = DEFAULT_TOL,
                     identity_tol: float = 1e-9) -> ExtremeType:
    """Place ``f`` among the extreme rays of the half-line SAGE cone."""
    a = SortedAlphas(a)
    if f.support != a.support():
        raise ValueError("signomial support does not match the exponents")
    c = f.coeffs
    result = sage_membership(f, univariate_reduced(a), tol)
    if result.status is Status.NOT_MEMBER:
        return ExtremeType.NOT_MEMBER
    nz = [k for k, v in enumerate(c) if v != 0]
    if nz == [0] and c[0] > 0:
        return ExtremeType.TYPE1
    if nz == [0, 1] and c[1] > 0 and c[0] == -c[1]:
        return ExtremeType.TYPE2
    if len(nz) == 3 and nz[1] == nz[0] + 1 and nz[2] == nz[1] + 1:
        i = nz[1]
        lo, mid, hi = c[i - 1], c[i], c[i + 1]
        if lo > 0 and hi > 0 and mid < 0:
            w_lo, w_hi = _weights(a, i)
            if lo * w_hi >= w_lo * hi and _type3_identity(c, w_lo, w_hi, i, identity_tol):
                return ExtremeType.TYPE3
    return ExtremeType.NOT_EXTREME
