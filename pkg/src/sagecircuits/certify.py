"""Checking, deciding and refining SAGE certificates.

A SAGE decomposition writes a coefficient vector ``c`` as a sum of
lambda-witnessed AGE vectors plus a nonnegative residual. Every check here is
done in the log domain with :mod:`mpmath` so that products of large powers do
not overflow.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence, Union

import mpmath
import numpy as np

from . import exact as ex
from .circuits import Circuit, Support
from .lp import LPStatus
from .polyhedra import HPolyhedron, lp_maximize
from .solver import Term, max_slack, polish

log = logging.getLogger(__name__)

DEFAULT_TOL = 1e-8
DEFAULT_SNAP_RADIUS = 1e-2
_DPS = 50
_PRUNE_LEVELS = (1e-7, 1e-6, 1e-5, 1e-4, 1e-3)

Scalar = Union[Fraction, float]


class CertificateError(ValueError):
    """A certificate or its inputs violate a precondition."""


class RefinementError(CertificateError):
    """An approximate certificate could not be turned into an exact one."""


def _coeff(x) -> Scalar:
    if isinstance(x, float):
        return x
    if isinstance(x, (np.floating,)):
        return float(x)
    return ex.to_fraction(x)


@dataclass(frozen=True)
class Signomial:
    """``x -> sum_alpha c_alpha exp(alpha @ x)`` over a fixed support.

    Coefficients are Fractions when given as ints, Fractions or strings and
    stay floats when given as floats.
    """

    support: Support
    coeffs: tuple

    def __init__(self, support: Support, coeffs: Sequence):
        cs = tuple(_coeff(v) for v in coeffs)
        if len(cs) != support.m:
            raise CertificateError(f"expected {support.m} coefficients, got {len(cs)}")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "coeffs", cs)

    @property
    def exact(self) -> bool:
        return all(isinstance(v, Fraction) for v in self.coeffs)

    def floats(self) -> np.ndarray:
        return np.array([float(v) for v in self.coeffs])

    def __call__(self, x: Sequence[float]) -> float:
        pts = np.array([[float(v) for v in p] for p in self.support.points])
        return float(self.floats() @ np.exp(pts @ np.asarray(x, dtype=float)))


@dataclass(frozen=True)
class AGEWitness:
    """Relative-entropy witness ``nu`` for the AGE cone with negative index ``beta``."""

    beta: int
    nu: tuple

    def __init__(self, beta: int, nu: Sequence):
        object.__setattr__(self, "beta", int(beta))
        object.__setattr__(self, "nu", tuple(_coeff(v) for v in nu))


@dataclass(frozen=True)
class SageDecomposition:
    """Terms ``(circuit, coefficient vector)`` plus a nonnegative residual."""

    terms: tuple
    residual: tuple
    exact: bool = False

    def total(self) -> tuple:
        m = len(self.residual)
        out = list(self.residual)
        for _, cv in self.terms:
            for i in range(m):
                out[i] = out[i] + cv[i]
        return tuple(out)


class Status(str, Enum):
    MEMBER = "MEMBER"
    NOT_MEMBER = "NOT_MEMBER"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class MembershipResult:
    status: Status
    slack: float
    decomposition: Optional[SageDecomposition] = None
    converged: bool = True
    notes: tuple = field(default=())


# --------------------------------------------------------------------------
# single-cone checks

def _mpf(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def age_log_violation(c: Sequence, lam: Circuit) -> float:
    """How far the lambda-witnessed inequality fails, in the log domain.

    Returns ``log(-c_beta) + sigma - sum lam_a (log c_a - log lam_a)`` when
    ``c_beta < 0`` (positive means violated), ``-inf`` when ``c_beta >= 0``
    and ``+inf`` when some weighted coefficient is zero. Signs off ``beta``
    are not inspected.
    """
    cb = c[lam.beta]
    if cb >= 0:
        return float("-inf")
    with mpmath.workdps(_DPS):
        rhs = mpmath.log(-_mpf(cb)) + _mpf(lam.sigma)
        lhs = mpmath.mpf(0)
        for a in lam.positive:
            if c[a] <= 0:
                return float("inf")
            lhs += _mpf(lam.lam[a]) * (mpmath.log(_mpf(c[a])) - mpmath.log(_mpf(lam.lam[a])))
        return float(rhs - lhs)


def lambda_age_check(f: Union[Signomial, Sequence], lam: Circuit, tol: float = DEFAULT_TOL) -> bool:
    """Membership in the lambda-witnessed AGE cone, with log-domain tolerance ``tol``."""
    c = f.coeffs if isinstance(f, Signomial) else tuple(f)
    if len(c) != len(lam.lam):
        raise CertificateError("coefficient vector and circuit have different lengths")
    if any(v < 0 for i, v in enumerate(c) if i != lam.beta):
        return False
    return age_log_violation(c, lam) <= tol


def _support_value(s: Support, x: HPolyhedron, nu: Sequence) -> Optional[Fraction]:
    res = lp_maximize(x, ex.neg(s.apply(ex.vector(nu))))
    return res.value if res.status is LPStatus.OPTIMAL else None


def relative_entropy(nu: Sequence, c: Sequence) -> mpmath.mpf:
    """``sum nu log(nu / c)`` with ``0 log 0 = 0`` and ``+inf`` when ``nu > 0 = c``."""
    with mpmath.workdps(_DPS):
        total = mpmath.mpf(0)
        for n, v in zip(nu, c):
            if n == 0:
                continue
            if v == 0:
                return mpmath.inf
            total += _mpf(n) * mpmath.log(_mpf(n) / _mpf(v))
        return total


def check_relent_certificate(f: Signomial, w: AGEWitness, x: HPolyhedron,
                             tol: float = DEFAULT_TOL) -> bool:
    """Check ``sigma_X(-A nu) + D(nu off beta, e * c off beta) <= c_beta``."""
    c, nu, b = f.coeffs, w.nu, w.beta
    if len(nu) != len(c):
        raise CertificateError("witness length does not match the support")
    if any(v < 0 for i, v in enumerate(c) if i != b):
        raise CertificateError("coefficients off beta must be nonnegative")
    if all(v == 0 for v in nu):
        return False
    if any(v < 0 for i, v in enumerate(nu) if i != b):
        raise CertificateError("witness has a negative entry off beta")
    total = sum(Fraction(v) for v in nu)
    if abs(total) > (0 if all(isinstance(v, Fraction) for v in nu) else 1e-12 * max(abs(v) for v in nu)):
        raise CertificateError("witness entries must sum to zero")
    sigma = _support_value(f.support, x, [Fraction(v) for v in nu])
    if sigma is None:
        return False
    with mpmath.workdps(_DPS):
        e = mpmath.e
        D = relative_entropy([nu[i] for i in range(len(c)) if i != b],
                             [e * _mpf(c[i]) for i in range(len(c)) if i != b])
        lhs = _mpf(sigma) + D
        return bool(lhs <= _mpf(c[b]) + tol * (1 + abs(_mpf(c[b]))))


def nu_to_lambda(w: AGEWitness) -> tuple[tuple, Scalar]:
    """Normalize ``nu`` to ``lam`` with ``lam_beta = -1``; returns ``(lam, scale)``."""
    nu = w.nu
    if not any(v < 0 for v in nu):
        raise CertificateError("witness has no negative entry")
    s = -nu[w.beta]
    if s <= 0:
        raise CertificateError("witness is not negative at beta")
    return tuple(v / s for v in nu), s


def lambda_to_nu(f: Signomial, lam: Circuit) -> AGEWitness:
    cb = f.coeffs[lam.beta]
    if cb >= 0:
        raise CertificateError("conversion needs a negative coefficient at beta")
    return AGEWitness(lam.beta, tuple(-cb * v for v in lam.lam))


def convert_witness(obj, f: Optional[Signomial] = None):
    """Switch between the relative-entropy and the circuit form of a witness."""
    if isinstance(obj, AGEWitness):
        return nu_to_lambda(obj)
    if isinstance(obj, Circuit):
        if f is None:
            raise CertificateError("converting a circuit needs the signomial")
        return lambda_to_nu(f, obj)
    raise TypeError(f"cannot convert {type(obj).__name__}")


def dual_membership_check(v: Sequence, circuits: Sequence[Circuit], tol: float = 1e-12) -> bool:
    """``exp(sigma) prod v_a^lam_a >= v_beta`` for every circuit."""
    if any(x < 0 for x in v):
        raise CertificateError("dual vector has a negative entry")
    with mpmath.workdps(_DPS):
        for lam in circuits:
            vb = v[lam.beta]
            if any(v[a] == 0 for a in lam.positive):
                if vb > 0:
                    return False
                continue
            if vb == 0:
                continue
            lhs = _mpf(lam.sigma) + sum(_mpf(lam.lam[a]) * mpmath.log(_mpf(v[a])) for a in lam.positive)
            if lhs < mpmath.log(_mpf(vb)) - tol:
                return False
    return True


# --------------------------------------------------------------------------
# membership

def _h(term: Term, a) -> float:
    return float(np.exp(term.log_h(np.asarray(a, dtype=float))))


def _term_vector(m: int, term: Term, a, d) -> tuple:
    out = [0.0] * m
    for j, p in enumerate(term.pos):
        out[p] = float(a[j])
    out[term.beta] = -float(d)
    return tuple(out)


def _decomposition(c: np.ndarray, circuits, terms, a, d, tol: float) -> Optional[SageDecomposition]:
    m = len(c)
    by_key = {(tm.beta, tm.pos): ci for tm, ci in zip(terms, circuits)}
    out = []
    for tm, ak, dk in zip(terms, a, d):
        out.append((by_key[(tm.beta, tm.pos)], _term_vector(m, tm, ak, dk)))
    residual = c - sum((np.array(v) for _, v in out), np.zeros(m))
    scale = float(np.max(np.abs(c))) or 1.0
    if np.any(residual < -tol * scale):
        return None
    residual = np.where(residual < 0, 0.0, residual)
    for lam, cv in out:
        if not lambda_age_check(cv, lam, tol):
            return None
    return SageDecomposition(tuple(out), tuple(float(r) for r in residual))


def _circuit_list(circuits) -> list[Circuit]:
    return list(circuits.circuits if hasattr(circuits, "circuits") else circuits)


def sage_membership(f: Signomial, circuits, tol: float = DEFAULT_TOL) -> MembershipResult:
    """Decide ``f`` against the SAGE cone generated by ``circuits``.

    ``circuits`` is normally the reduced set. The reported slack is the
    optimal value of the max-slack program after scaling ``c`` to unit
    max-norm; it is ``nan`` when no solve was needed.
    """
    circuits = _circuit_list(circuits)
    m = f.support.m
    if any(len(ci.lam) != m for ci in circuits):
        raise CertificateError("circuits do not match the support")
    c = f.floats()
    if all(v >= 0 for v in f.coeffs):
        dec = SageDecomposition((), tuple(f.coeffs), exact=f.exact)
        return MembershipResult(Status.MEMBER, float("nan"), dec, notes=("posynomial",))
    if not circuits:
        return MembershipResult(Status.NOT_MEMBER, float("nan"), notes=("no circuits; cone is the orthant",))
    # dedupe by (beta, positive support) which identifies a circuit
    uniq = {}
    for ci in circuits:
        uniq.setdefault((ci.beta, ci.positive), ci)
    circuits = list(uniq.values())
    terms = [Term.from_circuit(ci) for ci in circuits]
    sol = max_slack(c, terms)
    t = sol.slack
    if t < -tol:
        return MembershipResult(Status.NOT_MEMBER, t, converged=sol.converged)
    if t > 0:
        d = np.minimum(sol.d, [_h(tm, ak) for tm, ak in zip(terms, sol.a)])
        dec = _decomposition(c, circuits, terms, sol.a, d, tol)
        if dec is not None:
            return MembershipResult(Status.MEMBER, t, dec, sol.converged)
    # near the boundary the barrier iterate carries small spurious terms of
    # order sqrt(gap); keep the sparsest polished decomposition that verifies
    best = None
    for prune in _PRUNE_LEVELS:
        pterms, pa, pd = polish(c, terms, sol.a, prune=prune)
        dec = _decomposition(c, [uniq[(tm.beta, tm.pos)] for tm in pterms], pterms, pa, pd, tol)
        if dec is not None and (best is None or len(dec.terms) < len(best.terms)):
            best = dec
    if best is not None:
        return MembershipResult(Status.MEMBER, t, best, sol.converged, notes=("polished",))
    return MembershipResult(Status.INCONCLUSIVE, t, converged=sol.converged)


# --------------------------------------------------------------------------
# refinement

def _snap(w: AGEWitness, circuits: Sequence[Circuit], radius: float) -> Circuit:
    nu = [float(v) for v in w.nu]
    norm = max(abs(v) for v in nu)
    if norm == 0:
        raise RefinementError("zero witness")
    direction = [v / norm for v in nu]
    best, dist = None, float("inf")
    for ci in circuits:
        dd = max(abs(float(l) - v) for l, v in zip(ci.lam, direction))
        if dd < dist:
            best, dist = ci, dd
    if best is None or dist > radius:
        raise RefinementError(f"no circuit within {radius} of witness (nearest at {dist:.3g})")
    return best


def _rational_candidate(c: tuple, circuits, a_float, D: int):
    """Rationalize ``a`` with denominators up to ``D`` and repair exactly.

    Returns ``(terms, residual, worst_violation)`` or None.
    """
    m = len(c)
    a = []
    for ak in a_float:
        a.append([Fraction(float(v)).limit_denominator(D) for v in ak])
    keep = [(ci, ak) for ci, ak in zip(circuits, a) if all(v > 0 for v in ak)]
    if not keep:
        return None
    circuits = [ci for ci, _ in keep]
    a = [ak for _, ak in keep]
    pos = [ci.positive for ci in circuits]

    def h(k):
        ci = circuits[k]
        return Fraction(_h(Term.from_circuit(ci), [float(v) for v in a[k]]))

    for _ in range(50):
        d = [h(k) for k in range(len(circuits))]
        changed = False
        for alpha in range(m):
            users = [(k, j) for k in range(len(circuits)) for j, p in enumerate(pos[k]) if p == alpha]
            if not users:
                continue
            avail = c[alpha] + sum(d[k] for k, ci in enumerate(circuits) if ci.beta == alpha)
            total = sum(a[k][j] for k, j in users)
            if total > avail:
                if avail <= 0:
                    return None
                f = avail / total
                for k, j in users:
                    a[k][j] *= f
                changed = True
        if not changed:
            break
    else:
        return None
    d = [h(k) for k in range(len(circuits))]
    # pure-beta positions: top up d where the total falls short
    for alpha in range(m):
        if any(alpha in p for p in pos):
            continue
        owners = [k for k, ci in enumerate(circuits) if ci.beta == alpha]
        short = -(c[alpha] + sum(d[k] for k in owners))
        if short > 0:
            if not owners:
                return None
            d[owners[-1]] += short
    terms = []
    for k, ci in enumerate(circuits):
        cv = [Fraction(0)] * m
        for j, p in enumerate(pos[k]):
            cv[p] = a[k][j]
        cv[ci.beta] = -d[k]
        terms.append((ci, tuple(cv)))
    residual = list(c)
    for _, cv in terms:
        residual = [r - v for r, v in zip(residual, cv)]
    if any(r < 0 for r in residual):
        return None
    worst = max(age_log_violation(cv, ci) for ci, cv in terms)
    return terms, tuple(residual), worst


def refine_certificate(f: Signomial, approx: Sequence[AGEWitness], circuits: Sequence[Circuit],
                       snap_radius: float = DEFAULT_SNAP_RADIUS,
                       tol: float = DEFAULT_TOL) -> SageDecomposition:
    """Snap approximate witnesses to circuits and re-solve with those circuits fixed.

    For rational coefficients the result is exact: the terms are rational and
    add up to ``c`` minus a nonnegative rational residual. Each term meets the
    lambda-witnessed inequality to within ``tol / 10`` in the log domain.
    """
    circuits = _circuit_list(circuits)
    if not approx:
        raise RefinementError("no witnesses to refine")
    snapped = []
    for w in approx:
        ci = _snap(w, circuits, snap_radius)
        if ci not in snapped:
            snapped.append(ci)
    c = f.floats()
    terms = [Term.from_circuit(ci) for ci in snapped]
    sol = max_slack(c, terms)
    if sol.slack < -tol:
        raise RefinementError(f"fixed-circuit program is infeasible (slack {sol.slack:.3g})")
    if not f.exact:
        pterms, pa, pd = polish(c, terms, sol.a)
        lookup = {(ci.beta, ci.positive): ci for ci in snapped}
        dec = _decomposition(c, [lookup[(tm.beta, tm.pos)] for tm in pterms], pterms, pa, pd, tol / 10)
        if dec is None:
            raise RefinementError("polished certificate failed verification")
        return dec
    best = None
    for D in (10 ** k for k in range(1, 13)):
        cand = _rational_candidate(f.coeffs, snapped, sol.a, D)
        if cand is None:
            continue
        if cand[2] <= 1e-14:
            best = cand
            break
        if cand[2] <= tol / 10 and (best is None or cand[2] < best[2]):
            best = cand
    if best is None:
        raise RefinementError("no rational certificate within tolerance")
    terms_q, residual, worst = best
    log.debug("refined certificate: worst log violation %.3g", worst)
    return SageDecomposition(tuple(terms_q), residual, exact=True)


# --------------------------------------------------------------------------
# oracle

def grid_min(f: Signomial, box: Sequence[tuple], resolution: int) -> tuple[float, tuple]:
    """Minimum of ``f`` on a regular grid; returns ``(value, argmin)``.

    ``box`` holds one ``(lo, hi)`` pair per coordinate. The value only
    bounds the true minimum from above.
    """
    if len(box) != f.support.n:
        raise ValueError(f"box has {len(box)} axes, support lives in R^{f.support.n}")
    if resolution < 1:
        raise ValueError("resolution must be positive")
    axes = []
    for lo, hi in box:
        if not lo <= hi:
            raise ValueError(f"empty box axis [{lo}, {hi}]")
        axes.append(np.linspace(float(lo), float(hi), resolution))
    pts = np.array([[float(v) for v in p] for p in f.support.points])
    coeffs = f.floats()
    best, arg = float("inf"), None
    for chunk in _chunks(itertools.product(*axes), 100_000):
        X = np.array(chunk)
        vals = np.exp(X @ pts.T) @ coeffs
        i = int(np.argmin(vals))
        if vals[i] < best:
            best, arg = float(vals[i]), tuple(X[i])
    return best, arg


def _chunks(it, size):
    while True:
        block = list(itertools.islice(it, size))
        if not block:
            return
        yield block
