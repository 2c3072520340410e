"""Sublinear circuits of a finite point set relative to a polyhedron.

For a support ``A`` (points in R^n, indexed 0..m-1) and a polyhedron ``X``, the
normalized circuits with negative index ``beta`` are the outer facet normals of

    P = -A^T X + polar(N_beta),

scaled so that the ``beta`` entry is -1. ``N_beta`` is the cone of vectors in
R^m summing to zero whose entries off ``beta`` are nonnegative; its polar is
generated by the lineality direction ``1`` and the rays ``-e_alpha``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

from . import exact as ex
from .exact import RationalVector
from .lp import LPStatus
from .polyhedra import (EmptyPolyhedronError, HPolyhedron, NotAConeError, VPolyhedron,
                        dd_convert, lp_maximize)


class SupportError(ValueError):
    """The support violates its invariants for the given domain."""


@dataclass(frozen=True)
class Support:
    """Ordered, pairwise distinct exponent points of a signomial."""

    points: tuple

    def __init__(self, points: Sequence[Sequence]):
        pts = tuple(ex.vector(p) for p in points)
        if not pts:
            raise SupportError("a support needs at least one point")
        n = len(pts[0])
        for i, p in enumerate(pts):
            if len(p) != n:
                raise SupportError(f"point {i} has dimension {len(p)}, expected {n}")
        seen = {}
        for i, p in enumerate(pts):
            if p in seen:
                raise SupportError(f"point {i} duplicates point {seen[p]}")
            seen[p] = i
        object.__setattr__(self, "points", pts)

    @property
    def m(self) -> int:
        return len(self.points)

    @property
    def n(self) -> int:
        return len(self.points[0])

    def apply(self, nu: Sequence) -> RationalVector:
        """``A nu = sum_alpha nu_alpha * alpha`` in R^n."""
        if len(nu) != self.m:
            raise ValueError(f"expected a vector of length {self.m}")
        out = [Fraction(0)] * self.n
        for w, p in zip(nu, self.points):
            if w:
                for k in range(self.n):
                    out[k] += w * p[k]
        return tuple(out)

    def adjoint(self, x: Sequence) -> RationalVector:
        """``A^T x = (alpha @ x)_alpha`` in R^m."""
        return tuple(ex.dot(p, x) for p in self.points)


@dataclass(frozen=True, order=True)
class Circuit:
    """Normalized circuit: ``lam[beta] == -1`` and ``sigma = sigma_X(-A lam)``."""

    beta: int
    lam: RationalVector
    sigma: Fraction

    def __init__(self, lam: Sequence, beta: int, sigma=0):
        object.__setattr__(self, "lam", ex.vector(lam))
        object.__setattr__(self, "beta", int(beta))
        object.__setattr__(self, "sigma", ex.to_fraction(sigma))

    @property
    def positive(self) -> tuple[int, ...]:
        return tuple(i for i, v in enumerate(self.lam) if v > 0)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, v in enumerate(self.lam) if v != 0)


class FunctionalForm(NamedTuple):
    """The affine map ``y -> lam @ y + sigma``, stored as ``(lam, sigma)``."""

    lam: tuple
    sigma: Fraction

    def __call__(self, y: Sequence):
        return sum((a * b for a, b in zip(self.lam, y)), Fraction(0)) + self.sigma

    def as_vector(self) -> RationalVector:
        return tuple(self.lam) + (self.sigma,)


def functional_form(c: Circuit) -> FunctionalForm:
    return FunctionalForm(c.lam, c.sigma)


def _direction_basis(V: VPolyhedron) -> tuple:
    gens = [ex.sub(v, V.vertices[0]) for v in V.vertices[1:]]
    gens += list(V.rays) + list(V.lineality)
    return ex.span_basis(gens, V.dim)


def check_support(s: Support, X: VPolyhedron) -> None:
    """Reject supports whose exponentials are linearly dependent on ``X``.

    Two exponentials ``exp(alpha x)`` and ``exp(alpha' x)`` coincide up to a
    constant factor on ``X`` exactly when ``alpha - alpha'`` is orthogonal to
    the direction space of the affine hull of ``X``.
    """
    if X.dim != s.n:
        raise SupportError(f"support lives in R^{s.n} but X lives in R^{X.dim}")
    basis = _direction_basis(X)
    for i in range(s.m):
        for j in range(i + 1, s.m):
            diff = ex.sub(s.points[i], s.points[j])
            if all(ex.dot(diff, d) == 0 for d in basis):
                raise SupportError(
                    f"points {i} and {j} give proportional exponentials on X")


def _v_form(x: HPolyhedron) -> VPolyhedron:
    V = dd_convert(x)
    if V.is_empty():
        raise EmptyPolyhedronError("X is empty")
    return V


def build_p_polyhedron(s: Support, x: HPolyhedron, beta: int,
                       x_vertices: Optional[VPolyhedron] = None) -> VPolyhedron:
    """Generators of ``-A^T X + polar(N_beta)`` in R^m."""
    if not 0 <= beta < s.m:
        raise IndexError(f"beta={beta} out of range for {s.m} points")
    V = x_vertices if x_vertices is not None else _v_form(x)
    m = s.m
    vertices = [ex.neg(s.adjoint(v)) for v in V.vertices]
    rays = [ex.neg(s.adjoint(r)) for r in V.rays]
    rays = [r for r in rays if not ex.is_zero(r)]
    rays += [ex.neg(ex.unit(m, a)) for a in range(m) if a != beta]
    lineality = [(Fraction(1),) * m]
    lineality += [g for g in (ex.neg(s.adjoint(l)) for l in V.lineality) if not ex.is_zero(g)]
    return VPolyhedron(vertices, rays, lineality, m)


def _circuits_for_beta(s: Support, x: HPolyhedron, V: VPolyhedron, beta: int) -> list[Circuit]:
    P = build_p_polyhedron(s, x, beta, V)
    H = dd_convert(P)
    out = []
    for w, h in zip(H.A, H.b):
        # outer normals lie in rec(P)^polar, a subset of N_beta
        assert w[beta] < 0, f"facet normal {w} has nonnegative beta entry"
        k = -w[beta]
        lam = ex.scale(1 / k, w)
        sigma = h / k
        res = lp_maximize(x, ex.neg(s.apply(lam)))
        assert res.status is LPStatus.OPTIMAL and res.value == sigma, \
            f"support function mismatch for {lam}: {res} vs {sigma}"
        out.append(Circuit(lam, beta, sigma))
    return sorted(out, key=lambda c: c.lam)


def enumerate_circuits(s: Support, x: HPolyhedron, beta: Optional[int] = None) -> list[Circuit]:
    """All normalized circuits of ``s`` relative to ``x``, ordered by (beta, lam)."""
    if x.dim != s.n:
        raise SupportError(f"support lives in R^{s.n} but X lives in R^{x.dim}")
    V = _v_form(x)
    check_support(s, V)
    betas = range(s.m) if beta is None else [beta]
    out: list[Circuit] = []
    for b in betas:
        out.extend(_circuits_for_beta(s, x, V, b))
    assert len({(c.lam, c.sigma) for c in out}) == len(out), "duplicate circuits across beta"
    return out


def conic_circuits(s: Support, x_cone: VPolyhedron, beta: int) -> list[Circuit]:
    """Circuits for a conic ``X`` as edge generators of ``{nu in N_beta : A nu in X*}``.

    Every such circuit has ``sigma == 0``.
    """
    if not x_cone.is_cone():
        raise NotAConeError("conic_circuits expects X to be a cone")
    if not 0 <= beta < s.m:
        raise IndexError(f"beta={beta} out of range for {s.m} points")
    check_support(s, x_cone)
    m = s.m
    rows = [ex.neg(ex.unit(m, a)) for a in range(m) if a != beta]
    ones = (Fraction(1),) * m
    rows += [ones, ex.neg(ones)]
    # A nu in X*  <=>  (A nu) @ r >= 0 for rays, == 0 for lineality
    rows += [ex.neg(s.adjoint(r)) for r in x_cone.rays]
    for l in x_cone.lineality:
        rows += [s.adjoint(l), ex.neg(s.adjoint(l))]
    H = HPolyhedron(rows, [0] * len(rows), m)
    V = dd_convert(H)
    assert not V.lineality, "N_beta is pointed"
    out = []
    for r in V.rays:
        k = -r[beta]
        assert k > 0
        out.append(Circuit(ex.scale(1 / k, r), beta, 0))
    return sorted(out, key=lambda c: c.lam)


def is_circuit(s: Support, x: HPolyhedron, nu: Sequence) -> bool:
    """Whether ``nu`` is (a positive multiple of) a circuit of ``s`` relative to ``x``."""
    nu = ex.vector(nu)
    if len(nu) != s.m or ex.is_zero(nu):
        return False
    negatives = [i for i, v in enumerate(nu) if v < 0]
    if len(negatives) != 1 or sum(nu) != 0:
        return False
    beta = negatives[0]
    lam = ex.scale(1 / -nu[beta], nu)
    return any(c.lam == lam for c in enumerate_circuits(s, x, beta))


def circuit_violations(c: Circuit, s: Support, x: Optional[HPolyhedron] = None) -> list[str]:
    """List the circuit invariants that ``c`` breaks (empty when valid)."""
    problems = []
    lam = c.lam
    if len(lam) != s.m:
        return [f"length {len(lam)} != {s.m}"]
    if lam[c.beta] != -1:
        problems.append("lam[beta] != -1")
    if any(v < 0 for i, v in enumerate(lam) if i != c.beta):
        problems.append("negative entry off beta")
    if sum(lam) != 0:
        problems.append("entries do not sum to zero")
    if x is not None:
        res = lp_maximize(x, ex.neg(s.apply(lam)))
        if res.status is not LPStatus.OPTIMAL:
            problems.append("sigma is not finite")
        elif res.value != c.sigma:
            problems.append(f"sigma {c.sigma} != support function {res.value}")
    if not ex.affinely_independent([s.points[i] for i in c.positive]):
        problems.append("positive support is affinely dependent")
    if len(c.support) > s.n + 2:
        problems.append("support larger than n + 2")
    return problems
