"""Exact rational scalars, vectors and matrices.

Scalars are :class:`fractions.Fraction`; vectors are tuples of fractions and
matrices are tuples of row tuples. Everything here is immutable, so values can
be shared freely between callers.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence, Union

Rational = Fraction
RationalVector = tuple  # tuple[Fraction, ...]
RationalMatrix = tuple  # tuple[tuple[Fraction, ...], ...]

Number = Union[int, Fraction, str]


def to_fraction(x) -> Fraction:
    """Convert ``x`` to a Fraction.

    Accepts ints, Fractions, floats (converted exactly) and strings such as
    ``"3"``, ``"-2/5"`` or ``"0.25"``.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (int, float)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def format_fraction(x: Fraction) -> str:
    """Render as ``"p/q"``, or ``"p"`` when the denominator is one."""
    x = to_fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def vector(values: Iterable) -> RationalVector:
    return tuple(to_fraction(v) for v in values)


def matrix(rows: Iterable[Iterable]) -> RationalMatrix:
    out = tuple(vector(r) for r in rows)
    if out and len({len(r) for r in out}) != 1:
        raise ValueError("matrix rows have different lengths")
    return out


def zeros(n: int) -> RationalVector:
    return (Fraction(0),) * n


def unit(n: int, i: int) -> RationalVector:
    return tuple(Fraction(1) if j == i else Fraction(0) for j in range(n))


def dot(u: Sequence, v: Sequence) -> Fraction:
    if len(u) != len(v):
        raise ValueError(f"dimension mismatch: {len(u)} vs {len(v)}")
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def add(u: Sequence, v: Sequence) -> RationalVector:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence, v: Sequence) -> RationalVector:
    return tuple(a - b for a, b in zip(u, v))


def scale(t, v: Sequence) -> RationalVector:
    return tuple(t * a for a in v)


def neg(v: Sequence) -> RationalVector:
    return tuple(-a for a in v)


def is_zero(v: Sequence) -> bool:
    return all(a == 0 for a in v)


def mat_vec(M: Sequence[Sequence], v: Sequence) -> RationalVector:
    return tuple(dot(row, v) for row in M)


def transpose(M: Sequence[Sequence], cols: int | None = None) -> RationalMatrix:
    if not M:
        return tuple(() for _ in range(cols or 0))
    return tuple(tuple(row[j] for row in M) for j in range(len(M[0])))


def primitive(v: Sequence) -> RationalVector:
    """Positive rescaling of ``v`` to a primitive integer vector."""
    v = vector(v)
    if is_zero(v):
        return v
    den = lcm(*(a.denominator for a in v))
    ints = [int(a * den) for a in v]
    g = gcd(*ints)
    return tuple(Fraction(a // g) for a in ints)


def leading_unit(v: Sequence) -> RationalVector:
    """Positive rescaling so that the first nonzero entry is +1 or -1."""
    v = vector(v)
    for a in v:
        if a != 0:
            return scale(1 / abs(a), v)
    return v


def rref(M: Sequence[Sequence], cols: int | None = None) -> tuple[RationalMatrix, tuple[int, ...]]:
    """Reduced row echelon form by Gauss-Jordan with first-nonzero pivoting.

    Returns the nonzero rows of the RREF together with the pivot columns.
    """
    rows = [list(vector(r)) for r in M]
    ncols = len(rows[0]) if rows else (cols or 0)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        rows[r] = [a / p for a in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return tuple(tuple(row) for row in rows[:r]), tuple(pivots)


def rank(M: Sequence[Sequence]) -> int:
    if not M:
        return 0
    return len(rref(M)[1])


def kernel_basis(M: Sequence[Sequence], cols: int | None = None) -> list[RationalVector]:
    """Basis of ``{v : M v = 0}``, one vector per free column of the RREF.

    ``cols`` is only needed when ``M`` has no rows.
    """
    ncols = len(M[0]) if M else cols
    if ncols is None:
        raise ValueError("number of columns unknown for an empty matrix")
    R, pivots = rref(M, ncols)
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(R, pivots):
            v[p] = -row[f]
        basis.append(tuple(v))
    return basis


def span_basis(vectors: Sequence[Sequence], dim: int) -> RationalMatrix:
    """Canonical (RREF) basis of the span of ``vectors``."""
    if not vectors:
        return ()
    return rref(vectors, dim)[0]


def in_span(v: Sequence, basis_rref: Sequence[Sequence]) -> bool:
    return rank(list(basis_rref) + [v]) == len(basis_rref)


def reduce_modulo(v: Sequence, basis_rref: RationalMatrix) -> RationalVector:
    """Canonical representative of ``v`` modulo the span of an RREF basis.

    Every pivot coordinate of the basis is cleared.
    """
    out = list(vector(v))
    for row in basis_rref:
        p = next(j for j, a in enumerate(row) if a != 0)
        f = out[p]
        if f != 0:
            out = [a - f * b for a, b in zip(out, row)]
    return tuple(out)


def affinely_independent(points: Sequence[Sequence]) -> bool:
    """True iff no point is an affine combination of the others."""
    pts = [vector(p) for p in points]
    if not pts:
        return True
    d = len(pts[0])
    if any(len(p) != d for p in pts):
        raise ValueError("points have different dimensions")
    diffs = [sub(p, pts[0]) for p in pts[1:]]
    return rank(diffs) == len(diffs)
