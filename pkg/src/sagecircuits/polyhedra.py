"""Exact polyhedra: H- and V-representations, double description, support functions.

An :class:`HPolyhedron` is ``{x : A x <= b}``. A :class:`VPolyhedron` is
``conv(vertices) + cone(rays) + span(lineality)``. Conversions go through the
homogenization cone and the double description method; outputs are put in a
canonical form so that equal sets give equal objects.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from . import exact as ex
from .exact import RationalMatrix, RationalVector
from .lp import LPResult, LPStatus, maximize_free, simplex


class EmptyPolyhedronError(ValueError):
    """Raised where a nonempty polyhedron is required."""


class NotAConeError(ValueError):
    """Raised when a V-polyhedron has a vertex other than the origin."""


@dataclass(frozen=True)
class HPolyhedron:
    A: RationalMatrix
    b: RationalVector
    dim: int

    def __init__(self, A: Sequence[Sequence], b: Sequence, dim: int | None = None):
        A = ex.matrix(A)
        b = ex.vector(b)
        if dim is None:
            if not A:
                raise ValueError("dim is required for a polyhedron without rows")
            dim = len(A[0])
        if any(len(row) != dim for row in A):
            raise ValueError(f"rows of A must have length {dim}")
        if len(A) != len(b):
            raise ValueError(f"A has {len(A)} rows but b has {len(b)} entries")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "dim", dim)

    @classmethod
    def free(cls, dim: int) -> "HPolyhedron":
        return cls((), (), dim)

    @classmethod
    def empty(cls, dim: int) -> "HPolyhedron":
        return cls([ex.zeros(dim)], [-1], dim)

    def contains(self, x: Sequence) -> bool:
        return all(ex.dot(a, x) <= bi for a, bi in zip(self.A, self.b))

    def is_empty(self) -> bool:
        return lp_maximize(self, ex.zeros(self.dim)).status is LPStatus.INFEASIBLE


@dataclass(frozen=True)
class VPolyhedron:
    vertices: tuple
    rays: tuple
    lineality: tuple
    dim: int

    def __init__(self, vertices: Sequence[Sequence] = (), rays: Sequence[Sequence] = (),
                 lineality: Sequence[Sequence] = (), dim: int | None = None):
        vertices = tuple(ex.vector(v) for v in vertices)
        rays = tuple(ex.vector(r) for r in rays)
        lineality = tuple(ex.vector(v) for v in lineality)
        if dim is None:
            for group in (vertices, rays, lineality):
                if group:
                    dim = len(group[0])
                    break
            else:
                raise ValueError("dim is required for a generator-free polyhedron")
        for g in vertices + rays + lineality:
            if len(g) != dim:
                raise ValueError(f"generator {g} does not have dimension {dim}")
        for g in rays + lineality:
            if ex.is_zero(g):
                raise ValueError("ray and lineality generators must be nonzero")
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "lineality", lineality)
        object.__setattr__(self, "dim", dim)

    @classmethod
    def empty(cls, dim: int) -> "VPolyhedron":
        return cls((), (), (), dim)

    def is_empty(self) -> bool:
        return not self.vertices

    def is_cone(self) -> bool:
        return len(self.vertices) == 1 and ex.is_zero(self.vertices[0])

    def contains(self, x: Sequence) -> bool:
        """Exact membership test by an LP on the generator weights."""
        if self.is_empty():
            return False
        x = ex.vector(x)
        cols = [list(v) + [1] for v in self.vertices]
        cols += [list(r) + [0] for r in self.rays]
        cols += [list(v) + [0] for v in self.lineality]
        cols += [[-a for a in v] + [0] for v in self.lineality]
        target = list(x) + [1]
        A_eq = [[col[i] for col in cols] for i in range(self.dim + 1)]
        return simplex(A_eq, target, [0] * len(cols)).status is LPStatus.OPTIMAL


def lp_maximize(P: HPolyhedron, objective: Sequence) -> LPResult:
    """Exact ``max objective @ x`` over ``P`` (the support function of ``P``)."""
    objective = ex.vector(objective)
    if len(objective) != P.dim:
        raise ValueError(f"objective has dimension {len(objective)}, polyhedron has {P.dim}")
    return maximize_free(P.A, P.b, objective, P.dim)


def support_function(P: HPolyhedron, y: Sequence) -> Fraction | float:
    """``sup{y @ x : x in P}`` as a Fraction, or ``float('inf')`` when unbounded."""
    res = lp_maximize(P, y)
    if res.status is LPStatus.INFEASIBLE:
        raise EmptyPolyhedronError("support function of an empty set")
    if res.status is LPStatus.UNBOUNDED:
        return float("inf")
    return res.value


# --- double description ----------------------------------------------------

def _cone_generators(rows: Sequence[Sequence], D: int) -> tuple[list, list]:
    """Generators of ``{z in R^D : r @ z <= 0 for r in rows}``.

    Returns ``(rays, lineality)``; the rays are extreme modulo the lineality
    space. Constraints are inserted in lexicographic order and adjacency is
    decided by the rank of the commonly tight constraints.
    """
    ordered = sorted({ex.primitive(r) for r in rows if not ex.is_zero(r)})
    lin = [ex.unit(D, i) for i in range(D)]
    rays: list = []
    processed: list = []
    for a in ordered:
        vals = [ex.dot(a, l) for l in lin]
        k = next((i for i, v in enumerate(vals) if v != 0), None)
        if k is not None:
            l0 = lin[k]
            a0 = vals[k]
            if a0 > 0:
                l0, a0 = ex.neg(l0), -a0
            new_lin = []
            for i, l in enumerate(lin):
                if i != k:
                    new_lin.append(ex.primitive(ex.sub(l, ex.scale(ex.dot(a, l) / a0, l0)))
                                   if vals[i] != 0 else l)
            rays = [ex.primitive(ex.sub(r, ex.scale(ex.dot(a, r) / a0, l0))) for r in rays]
            rays.append(ex.primitive(l0))
            lin = new_lin
        else:
            target_rank = D - len(lin) - 2
            sv = [ex.dot(a, r) for r in rays]
            pos = [r for r, s in zip(rays, sv) if s > 0]
            pos_s = [s for s in sv if s > 0]
            keep = [r for r, s in zip(rays, sv) if s <= 0]
            neg_pairs = [(r, s) for r, s in zip(rays, sv) if s < 0]
            tight = {r: frozenset(i for i, p in enumerate(processed) if ex.dot(p, r) == 0)
                     for r in rays}
            new = []
            for p, sp in zip(pos, pos_s):
                for q, sq in neg_pairs:
                    common = tight[p] & tight[q]
                    if len(common) < target_rank:
                        continue
                    if ex.rank([processed[i] for i in common]) != target_rank:
                        continue
                    new.append(ex.primitive(ex.sub(ex.scale(sp, q), ex.scale(sq, p))))
            rays = keep + new
        processed.append(a)
        seen = set()
        rays = [r for r in rays if not (r in seen or seen.add(r))]
    return rays, lin


def _canonical_v(vertices, rays, lineality, dim) -> VPolyhedron:
    L = ex.span_basis(lineality, dim)
    verts = sorted({ex.reduce_modulo(v, L) for v in vertices})
    rs = set()
    for r in rays:
        r = ex.reduce_modulo(r, L)
        if not ex.is_zero(r):
            rs.add(ex.leading_unit(r))
    return VPolyhedron(verts, sorted(rs), L, dim)


def _canonical_h(rows: list, dim: int) -> HPolyhedron:
    """Rows are (a, b) pairs; scaled so the first nonzero of ``a`` is +-1."""
    out = set()
    for a, b in rows:
        for i, v in enumerate(a):
            if v != 0:
                s = 1 / abs(v)
                out.add((ex.scale(s, a), b * s))
                break
    ordered = sorted(out)
    return HPolyhedron([a for a, _ in ordered], [b for _, b in ordered], dim)


def h_to_v(P: HPolyhedron) -> VPolyhedron:
    d = P.dim
    rows = [tuple(a) + (-b,) for a, b in zip(P.A, P.b)]
    rows.append(ex.zeros(d) + (Fraction(-1),))
    rays, lin = _cone_generators(rows, d + 1)
    vertices, recession = [], []
    for r in rays:
        t = r[-1]
        if t > 0:
            vertices.append(ex.scale(1 / t, r[:-1]))
        else:
            recession.append(r[:-1])
    if not vertices:
        return VPolyhedron.empty(d)
    return _canonical_v(vertices, recession, [l[:-1] for l in lin], d)


def v_to_h(V: VPolyhedron) -> HPolyhedron:
    d = V.dim
    if V.is_empty():
        return HPolyhedron.empty(d)
    # cone of valid inequalities (a, b): a @ v <= b, a @ r <= 0, a @ l == 0
    rows = [tuple(v) + (Fraction(-1),) for v in V.vertices]
    rows += [tuple(r) + (Fraction(0),) for r in V.rays]
    rows += [tuple(l) + (Fraction(0),) for l in V.lineality]
    rows += [ex.neg(l) + (Fraction(0),) for l in V.lineality]
    rays, lin = _cone_generators(rows, d + 1)
    L = ex.span_basis(lin, d + 1)
    ineq = []
    for r in rays:
        r = ex.reduce_modulo(r, L)
        a, b = r[:-1], r[-1]
        if ex.is_zero(a):
            continue  # 0 <= b with b >= 0
        ineq.append((a, b))
    for l in L:
        a, b = l[:-1], l[-1]
        ineq.append((a, b))
        ineq.append((ex.neg(a), -b))
    return _canonical_h(ineq, d)


def dd_convert(P: Union[HPolyhedron, VPolyhedron]) -> Union[VPolyhedron, HPolyhedron]:
    """Convert between the H- and V-representation of the same point set."""
    if isinstance(P, HPolyhedron):
        return h_to_v(P)
    if isinstance(P, VPolyhedron):
        return v_to_h(P)
    raise TypeError(f"expected HPolyhedron or VPolyhedron, got {type(P).__name__}")


def minkowski_sum(p: VPolyhedron, q: VPolyhedron) -> VPolyhedron:
    if p.dim != q.dim:
        raise ValueError(f"dimension mismatch: {p.dim} vs {q.dim}")
    if p.is_empty() or q.is_empty():
        return VPolyhedron.empty(p.dim)
    vertices = [ex.add(u, v) for u in p.vertices for v in q.vertices]
    return VPolyhedron(vertices, p.rays + q.rays, p.lineality + q.lineality, p.dim)


def polar_cone(c: VPolyhedron) -> HPolyhedron:
    """``{y : g @ y <= 0}`` over the rays of ``c``, with equalities for its lineality."""
    if not c.is_cone():
        raise NotAConeError("polar_cone expects a cone (single vertex at the origin)")
    A, b = [], []
    for g in c.rays:
        A.append(g)
        b.append(0)
    for l in c.lineality:
        A.append(l)
        b.append(0)
        A.append(ex.neg(l))
        b.append(0)
    return HPolyhedron(A, b, c.dim)


def recession_cone(P: HPolyhedron) -> HPolyhedron:
    return HPolyhedron(P.A, ex.zeros(len(P.b)), P.dim)


def same_set(P: Union[HPolyhedron, VPolyhedron], Q: Union[HPolyhedron, VPolyhedron]) -> bool:
    """Exact equality of two polyhedra, checked generator-by-facet both ways."""
    Pv = P if isinstance(P, VPolyhedron) else h_to_v(P)
    Qv = Q if isinstance(Q, VPolyhedron) else h_to_v(Q)
    Ph = P if isinstance(P, HPolyhedron) else v_to_h(P)
    Qh = Q if isinstance(Q, HPolyhedron) else v_to_h(Q)
    return contains_v(Ph, Qv) and contains_v(Qh, Pv)


def contains_v(H: HPolyhedron, V: VPolyhedron) -> bool:
    """Whether the V-polyhedron lies inside the H-polyhedron."""
    if V.is_empty():
        return True
    for a, b in zip(H.A, H.b):
        if any(ex.dot(a, v) > b for v in V.vertices):
            return False
        if any(ex.dot(a, r) > 0 for r in V.rays):
            return False
        if any(ex.dot(a, l) != 0 for l in V.lineality):
            return False
    return True
