"""Two-phase tableau simplex over the rationals with Bland's rule."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

from .exact import RationalVector, to_fraction


class LPStatus(str, Enum):
    OPTIMAL = "OPTIMAL"
    UNBOUNDED = "UNBOUNDED"
    INFEASIBLE = "INFEASIBLE"


@dataclass(frozen=True)
class LPResult:
    status: LPStatus
    value: Optional[Fraction] = None
    maximizer: Optional[RationalVector] = None

    def __post_init__(self):
        optimal = self.status is LPStatus.OPTIMAL
        if optimal != (self.value is not None) or optimal != (self.maximizer is not None):
            raise ValueError("value and maximizer are present iff the status is OPTIMAL")


def _pivot(T: list[list[Fraction]], r: int, c: int) -> None:
    p = T[r][c]
    T[r] = [a / p for a in T[r]]
    row = T[r]
    for i, other in enumerate(T):
        if i != r and other[c] != 0:
            f = other[c]
            T[i] = [a - f * b for a, b in zip(other, row)]


def _iterate(T, basis, cost, allowed) -> bool:
    """Run primal simplex on tableau ``T`` (last column = rhs), maximizing ``cost``.

    Bland's rule: smallest improving column enters, ties in the ratio test go
    to the smallest basic variable. Returns False when unbounded.
    """
    while True:
        entering = None
        for j in allowed:
            if j in basis:
                continue
            reduced = cost[j] - sum((cost[b] * T[i][j] for i, b in enumerate(basis)), Fraction(0))
            if reduced > 0:
                entering = j
                break
        if entering is None:
            return True
        best = None
        for i, row in enumerate(T):
            a = row[entering]
            if a > 0:
                ratio = row[-1] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return False
        r = best[1]
        _pivot(T, r, entering)
        basis[r] = entering


def simplex(A_eq: Sequence[Sequence], b_eq: Sequence, c: Sequence) -> LPResult:
    """Maximize ``c @ z`` subject to ``A_eq @ z == b_eq`` and ``z >= 0``."""
    A = [[to_fraction(a) for a in row] for row in A_eq]
    b = [to_fraction(v) for v in b_eq]
    cost = [to_fraction(v) for v in c]
    n = len(cost)
    m = len(A)
    if any(len(row) != n for row in A) or len(b) != m:
        raise ValueError("inconsistent LP dimensions")
    for i in range(m):
        if b[i] < 0:
            A[i] = [-a for a in A[i]]
            b[i] = -b[i]

    # phase 1: artificials n..n+m-1
    T = [A[i] + [Fraction(int(i == k)) for k in range(m)] + [b[i]] for i in range(m)]
    basis = list(range(n, n + m))
    phase1 = [Fraction(0)] * n + [Fraction(-1)] * m
    _iterate(T, basis, phase1, range(n + m))
    if any(T[i][-1] != 0 for i, bv in enumerate(basis) if bv >= n):
        return LPResult(LPStatus.INFEASIBLE)

    # drive zero-valued artificials out of the basis, dropping redundant rows
    i = 0
    while i < len(T):
        if basis[i] >= n:
            j = next((j for j in range(n) if T[i][j] != 0), None)
            if j is None:
                del T[i]
                del basis[i]
                continue
            _pivot(T, i, j)
            basis[i] = j
        i += 1
    T = [row[:n] + [row[-1]] for row in T]

    if not _iterate(T, basis, cost, range(n)):
        return LPResult(LPStatus.UNBOUNDED)
    z = [Fraction(0)] * n
    for i, bv in enumerate(basis):
        z[bv] = T[i][-1]
    value = sum((ci * zi for ci, zi in zip(cost, z)), Fraction(0))
    return LPResult(LPStatus.OPTIMAL, value, tuple(z))


def maximize_free(A_ub: Sequence[Sequence], b_ub: Sequence, c: Sequence, dim: int) -> LPResult:
    """Maximize ``c @ x`` subject to ``A_ub @ x <= b_ub`` with ``x`` free in R^dim."""
    rows = len(A_ub)
    A_eq = []
    for i, row in enumerate(A_ub):
        if len(row) != dim:
            raise ValueError("constraint row has the wrong dimension")
        slack = [Fraction(int(k == i)) for k in range(rows)]
        A_eq.append(list(row) + [-a for a in row] + slack)
    cost = list(c) + [-to_fraction(a) for a in c] + [Fraction(0)] * rows
    if rows == 0:
        if all(to_fraction(a) == 0 for a in c):
            return LPResult(LPStatus.OPTIMAL, Fraction(0), tuple(Fraction(0) for _ in range(dim)))
        return LPResult(LPStatus.UNBOUNDED)
    res = simplex(A_eq, b_ub, cost)
    if res.status is not LPStatus.OPTIMAL:
        return res
    z = res.maximizer
    x = tuple(z[j] - z[dim + j] for j in range(dim))
    return LPResult(LPStatus.OPTIMAL, res.value, x)


def feasible_combination(columns: Sequence[Sequence], target: Sequence) -> Optional[RationalVector]:
    """Nonnegative weights ``mu`` with ``sum mu_i columns[i] == target``, or None."""
    if not columns:
        return () if all(to_fraction(t) == 0 for t in target) else None
    A_eq = [[col[r] for col in columns] for r in range(len(target))]
    res = simplex(A_eq, target, [0] * len(columns))
    return res.maximizer if res.status is LPStatus.OPTIMAL else None
