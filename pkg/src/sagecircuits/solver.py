"""Max-slack feasibility over a fixed family of circuits, by a log-barrier method.

Each circuit ``k`` (negative index ``beta_k``, positive part ``P_k`` with
weights ``lam_k``) owns variables ``a_k > 0`` on ``P_k`` and a free ``d_k``; its
coefficient vector is ``a_k`` on ``P_k`` and ``-d_k`` at ``beta_k``. The
program is

    maximize t
    s.t.  c - sum_k term_k - t >= 0                          (residual)
          exp(-sigma_k) prod (a_k / lam_k)^lam_k - d_k - t >= 0
          a_k > 0

The weighted geometric mean is concave, so every constraint is convex. The
coefficient vector is rescaled to unit max-norm before solving and the slack
``t`` is reported in that scale.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

log = logging.getLogger(__name__)

MU = 5.0
GAP = 1e-9


@dataclass(frozen=True)
class Term:
    """Float view of a circuit: positive support, weights, beta and sigma."""

    pos: tuple
    weights: tuple
    beta: int
    sigma: float

    @classmethod
    def from_circuit(cls, c) -> "Term":
        pos = c.positive
        return cls(pos, tuple(float(c.lam[i]) for i in pos), c.beta, float(c.sigma))

    def log_h(self, a: np.ndarray) -> float:
        w = np.asarray(self.weights)
        return float(np.dot(w, np.log(a) - np.log(w)) - self.sigma)


@dataclass
class SolveResult:
    slack: float            # optimal t for the normalized coefficients
    scale: float            # max |c|
    a: list                 # per term, unnormalized
    d: np.ndarray           # unnormalized
    converged: bool
    newton_steps: int


class _Layout:
    def __init__(self, terms: Sequence[Term], m: int):
        self.terms = list(terms)
        self.m = m
        self.offsets = []
        off = 0
        for t in self.terms:
            self.offsets.append(off)
            off += len(t.pos)
        self.na = off
        self.K = len(self.terms)
        self.nvar = self.na + self.K + 1
        R = np.zeros((m, self.nvar))
        for k, t in enumerate(self.terms):
            for j, alpha in enumerate(t.pos):
                R[alpha, self.offsets[k] + j] -= 1.0
            R[t.beta, self.na + k] += 1.0
        R[:, -1] = -1.0
        self.R = R

    def split(self, x):
        return [x[o:o + len(t.pos)] for o, t in zip(self.offsets, self.terms)], x[self.na:self.na + self.K], x[-1]


def _h(term: Term, a: np.ndarray) -> float:
    return math.exp(term.log_h(a))


def _barrier(L: _Layout, c: np.ndarray, x: np.ndarray, tau: float) -> float:
    a_all = x[:L.na]
    if np.any(a_all <= 0):
        return math.inf
    res = c + L.R @ x
    if np.any(res <= 0):
        return math.inf
    a, d, t = L.split(x)
    g = np.array([_h(term, ak) - dk - t for term, ak, dk in zip(L.terms, a, d)])
    if np.any(g <= 0):
        return math.inf
    return -tau * t - np.sum(np.log(res)) - np.sum(np.log(g)) - np.sum(np.log(a_all))


def _derivatives(L: _Layout, c: np.ndarray, x: np.ndarray, tau: float):
    a, d, t = L.split(x)
    res = c + L.R @ x
    grad = -(L.R.T @ (1.0 / res))
    hess = L.R.T @ (L.R / (res ** 2)[:, None])
    grad[-1] -= tau
    a_all = x[:L.na]
    grad[:L.na] -= 1.0 / a_all
    hess[np.arange(L.na), np.arange(L.na)] += 1.0 / a_all ** 2
    for k, term in enumerate(L.terms):
        ak = a[k]
        w = np.asarray(term.weights)
        h = _h(term, ak)
        gk = h - d[k] - t
        idx = np.r_[L.offsets[k] + np.arange(len(ak)), L.na + k, L.nvar - 1]
        dg = np.r_[h * w / ak, -1.0, -1.0]
        d2 = np.zeros((len(idx), len(idx)))
        d2[:len(ak), :len(ak)] = h * (np.outer(w, w) - np.diag(w)) / np.outer(ak, ak)
        grad[idx] -= dg / gk
        hess[np.ix_(idx, idx)] += np.outer(dg, dg) / gk ** 2 - d2 / gk
    return grad, hess


def _start(L: _Layout, c: np.ndarray) -> np.ndarray:
    x = np.zeros(L.nvar)
    for k, term in enumerate(L.terms):
        x[L.offsets[k]:L.offsets[k] + len(term.pos)] = np.asarray(term.weights) / (L.K + 1)
    x[-1] = 0.0
    a, d, _ = L.split(x)
    res = c + L.R @ x
    g = [_h(term, ak) - dk for term, ak, dk in zip(L.terms, a, d)]
    x[-1] = min(np.min(res), min(g, default=math.inf)) - 1.0
    return x


def max_slack(c: Sequence[float], terms: Sequence[Term], *, max_newton: int = 200) -> SolveResult:
    """Solve the max-slack program for coefficients ``c``.

    ``c`` must not be identically zero.
    """
    c = np.asarray(c, dtype=float)
    scale = float(np.max(np.abs(c)))
    if scale == 0:
        raise ValueError("coefficient vector is zero")
    cn = c / scale
    L = _Layout(terms, len(c))
    x = _start(L, cn)
    nbar = L.m + L.K + L.na
    tau = 1.0
    steps = 0
    converged = True
    while True:
        for _ in range(max_newton):
            grad, hess = _derivatives(L, cn, x, tau)
            try:
                dx = np.linalg.solve(hess, -grad)
            except np.linalg.LinAlgError:
                dx = np.linalg.lstsq(hess, -grad, rcond=None)[0]
            dec = -float(grad @ dx)
            if dec / 2 <= 1e-10:
                break
            f0 = _barrier(L, cn, x, tau)
            s = 1.0
            while s > 1e-12:
                f1 = _barrier(L, cn, x + s * dx, tau)
                if f1 <= f0 - 0.25 * s * dec:
                    break
                s *= 0.5
            else:
                # no progress possible in double precision
                break
            x = x + s * dx
            steps += 1
        else:
            converged = False
        if nbar / tau <= GAP:
            break
        tau *= MU
    a, d, t = L.split(x)
    log.debug("max_slack: t=%g after %d Newton steps", t, steps)
    return SolveResult(float(t), scale, [ak * scale for ak in a], d * scale, converged, steps)


def polish(c: Sequence[float], terms: Sequence[Term], a: Sequence[np.ndarray],
           prune: float = 1e-7, rounds: int = 200):
    """Push the solver output onto the boundary of each term's constraint.

    Tiny terms are dropped, every ``d_k`` is set to its largest allowed value
    ``h_k(a_k)`` and the ``a`` entries at each position are rescaled so they
    use exactly the mass available there. Returns ``(terms, a, d)``.
    """
    c = np.asarray(c, dtype=float)
    scale = float(np.max(np.abs(c))) or 1.0
    kept = [(tm, np.array(ak, dtype=float)) for tm, ak in zip(terms, a)
            if np.all(np.asarray(ak) > 0) and np.max(ak) > prune * scale]
    terms = [tm for tm, _ in kept]
    a = [ak for _, ak in kept]
    m = len(c)
    for _ in range(rounds):
        d = np.array([_h(tm, ak) for tm, ak in zip(terms, a)])
        changed = False
        for alpha in range(m):
            users = [(k, j) for k, tm in enumerate(terms) for j, p in enumerate(tm.pos) if p == alpha]
            if not users:
                continue
            avail = c[alpha] + sum(d[k] for k, tm in enumerate(terms) if tm.beta == alpha)
            total = sum(a[k][j] for k, j in users)
            if avail <= 0:
                continue
            f = avail / total
            if abs(f - 1) > 1e-15:
                changed = True
                for k, j in users:
                    a[k][j] *= f
        if not changed:
            break
    d = np.array([_h(tm, ak) for tm, ak in zip(terms, a)])
    return terms, a, d
