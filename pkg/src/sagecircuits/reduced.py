"""Circuit graph, reduced circuits and their minimality certificates.

The circuit graph is the cone in R^m x R generated by the functional forms
``(lam, sigma)`` of all normalized circuits together with ``(0, 1)``. A circuit
is reduced when its functional form spans an extreme ray of that cone.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import exact as ex
from .circuits import Circuit, FunctionalForm, functional_form
from .exact import RationalVector
from .lp import LPStatus, feasible_combination, maximize_free


class NotPointedError(ValueError):
    """The generated cone contains a line."""


class NotReducedError(ValueError):
    """The target circuit is a nonnegative combination of the others."""


@dataclass(frozen=True)
class CircuitGraph:
    """Generators of the circuit graph; the last one is always ``(0, 1)``."""

    circuits: tuple
    m: int

    @property
    def generators(self) -> tuple:
        forms = tuple(functional_form(c).as_vector() for c in self.circuits)
        return forms + (ex.unit(self.m + 1, self.m),)


@dataclass(frozen=True)
class ReducedSet:
    """Reduced circuits with one minimality witness ``y`` per circuit."""

    circuits: tuple
    witnesses: tuple = field(default=())
    m: int = 0

    def __len__(self):
        return len(self.circuits)

    def __iter__(self):
        return iter(self.circuits)

    def index(self, c: Circuit) -> int:
        return self.circuits.index(c)


def build_circuit_graph(circuits: Sequence[Circuit], m: Optional[int] = None) -> CircuitGraph:
    """Circuit graph in canonical order (by ``beta``, then ``lam``)."""
    if m is None:
        if not circuits:
            raise ValueError("m is required when there are no circuits")
        m = len(circuits[0].lam)
    if any(len(c.lam) != m for c in circuits):
        raise ValueError("circuits of different lengths")
    # circuits are normalized, so proportional functional forms are equal
    unique = sorted(set(circuits), key=lambda c: (c.beta, c.lam, c.sigma))
    return CircuitGraph(tuple(unique), m)


def _assert_pointed(g: CircuitGraph) -> None:
    gens = g.generators
    dim = g.m + 1
    # find z with gen @ z >= 1 for every generator
    res = maximize_free([ex.neg(v) for v in gens], [-1] * len(gens), [0] * dim, dim)
    if res.status is LPStatus.INFEASIBLE:
        raise NotPointedError("the circuit graph is not pointed")


def _minimality_lp(others: Sequence[Circuit], target: Circuit, m: int) -> Optional[RationalVector]:
    rows, rhs = [], []
    for c in others:
        # lam' @ y + sigma' >= 0
        rows.append(ex.neg(c.lam))
        rhs.append(c.sigma)
    # lam @ y + sigma == -1
    rows.append(target.lam)
    rhs.append(-1 - target.sigma)
    rows.append(ex.neg(target.lam))
    rhs.append(1 + target.sigma)
    res = maximize_free(rows, rhs, [0] * m, m)
    return res.maximizer if res.status is LPStatus.OPTIMAL else None


def reduced_circuits(g: CircuitGraph) -> ReducedSet:
    """Circuits whose functional form is not in the cone of the other generators."""
    _assert_pointed(g)
    gens = g.generators
    keep = []
    for i, c in enumerate(g.circuits):
        others = [v for j, v in enumerate(gens) if j != i]
        if feasible_combination(others, gens[i]) is None:
            keep.append(c)
    witnesses = []
    for c in keep:
        y = _minimality_lp([o for o in keep if o != c], c, g.m)
        if y is None:
            raise NotReducedError(f"no minimality witness for {c.lam}")
        witnesses.append(y)
    return ReducedSet(tuple(keep), tuple(witnesses), g.m)


def minimality_witness(r: ReducedSet, target: Circuit) -> RationalVector:
    """Exact ``y`` with ``phi(y) >= 0`` on the other reduced circuits and ``phi_target(y) = -1``."""
    if target not in r.circuits:
        raise NotReducedError("target is not in the reduced set")
    y = _minimality_lp([c for c in r.circuits if c != target], target, r.m)
    if y is None:
        raise NotReducedError(f"target {target.lam} is not reduced")
    return y


def separating_functional(y: Sequence, target: Circuit) -> tuple[float, ...]:
    """Linear functional ``z`` with ``z @ exp(y) = 1 - exp(-u)`` where ``u = phi_target(y) < 0``.

    ``z`` is nonnegative on every dual-feasible moment vector, so it separates
    ``exp(y)`` from the dual cone.
    """
    u = functional_form(target)(ex.vector(y))
    if u >= 0:
        raise ValueError(f"phi_target(y) = {u} must be negative")
    z = [0.0] * len(target.lam)
    for a in target.positive:
        z[a] = float(target.lam[a]) * math.exp(-float(y[a]))
    z[target.beta] = -math.exp(-float(u) - float(y[target.beta]))
    return tuple(z)


def dual_log_feasible(y: Sequence, circuits: Sequence[Circuit]) -> bool:
    """Exact check of ``phi(y) >= 0`` for every circuit (``y`` plays ``log v``)."""
    yv = ex.vector(y)
    return all(FunctionalForm(c.lam, c.sigma)(yv) >= 0 for c in circuits)


def violated_forms(y: Sequence, circuits: Sequence[Circuit]) -> list[int]:
    yv = ex.vector(y)
    return [i for i, c in enumerate(circuits) if functional_form(c)(yv) < 0]


def reduce(circuits: Sequence[Circuit], m: Optional[int] = None) -> ReducedSet:
    """Shortcut for ``reduced_circuits(build_circuit_graph(circuits, m))``."""
    return reduced_circuits(build_circuit_graph(circuits, m))


__all__ = [
    "CircuitGraph", "ReducedSet", "NotPointedError", "NotReducedError",
    "build_circuit_graph", "reduced_circuits", "minimality_witness",
    "separating_functional", "dual_log_feasible", "violated_forms", "reduce",
]
