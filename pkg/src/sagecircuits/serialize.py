"""JSON encoding of the package's data types.

Rationals travel as ``"p/q"`` strings (``"p"`` when integral). Floats are
written with 17 significant digits so they round-trip exactly; non-finite
floats become ``null``.
"""
from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Any

from . import exact as ex
from .certify import MembershipResult, SageDecomposition
from .circuits import Circuit
from .polyhedra import HPolyhedron, VPolyhedron
from .reduced import ReducedSet


def scalar(x) -> Any:
    """Fractions to strings, floats kept as floats."""
    if isinstance(x, Fraction):
        return ex.format_fraction(x)
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, int):
        return ex.format_fraction(Fraction(x))
    return float(x)


def vec(v) -> list:
    return [scalar(x) for x in v]


def circuit_to_json(c: Circuit) -> dict:
    return {"lambda": vec(c.lam), "beta": c.beta, "sigma": ex.format_fraction(c.sigma)}


def circuit_from_json(d: dict) -> Circuit:
    return Circuit(ex.vector(d["lambda"]), d["beta"], ex.to_fraction(d["sigma"]))


def reduced_to_json(r: ReducedSet) -> list:
    out = []
    for c, y in zip(r.circuits, r.witnesses):
        d = circuit_to_json(c)
        d["witness"] = vec(y)
        out.append(d)
    return out


def hpoly_to_json(p: HPolyhedron) -> dict:
    return {"A": [vec(r) for r in p.A], "b": vec(p.b)}


def vpoly_to_json(p: VPolyhedron) -> dict:
    return {"vertices": [vec(v) for v in p.vertices], "rays": [vec(r) for r in p.rays],
            "lineality": [vec(l) for l in p.lineality]}


def decomposition_to_json(d: SageDecomposition) -> dict:
    terms = []
    for c, cv in d.terms:
        t = circuit_to_json(c)
        t["coeffs"] = vec(cv)
        terms.append(t)
    return {"terms": terms, "residual": vec(d.residual), "exact": d.exact}


def result_to_json(r: MembershipResult) -> dict:
    out = {"status": r.status.value, "slack": r.slack}
    if r.decomposition is not None:
        dec = decomposition_to_json(r.decomposition)
        out["terms"] = dec["terms"]
        out["residual"] = dec["residual"]
        out["exact"] = dec["exact"]
    else:
        out["terms"] = []
        out["residual"] = None
    out["converged"] = r.converged
    if r.notes:
        out["notes"] = list(r.notes)
    return out


def _encode(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        return format(obj, ".17g") if math.isfinite(obj) else "null"
    if isinstance(obj, (int, str)):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, Fraction):
        return json.dumps(ex.format_fraction(obj))
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _encode(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if hasattr(obj, "item"):  # numpy scalars
        return _encode(obj.item(), indent, level)
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    """Deterministic JSON text with 17-significant-digit floats."""
    return _encode(obj, indent, 0)
