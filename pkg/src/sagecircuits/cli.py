"""Command-line front end.

Every subcommand reads one JSON problem document (a file path, or ``-`` for
standard input) and writes one JSON document to standard output.

Exit codes: 0 when the question was decided, 2 when the membership solver
was inconclusive, 1 on any error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

import jsonschema

from . import exact as ex
from . import serialize as sz
from .certify import (DEFAULT_SNAP_RADIUS, DEFAULT_TOL, AGEWitness, CertificateError,
                      Signomial, Status, check_relent_certificate, grid_min,
                      lambda_age_check, nu_to_lambda, refine_certificate, sage_membership)
from .circuits import Support, SupportError, enumerate_circuits, functional_form
from .polyhedra import EmptyPolyhedronError, HPolyhedron
from .reduced import minimality_witness, reduce, separating_functional
from .univariate import (SortedAlphas, classify_extreme, univariate_circuits,
                         univariate_reduced)

EXIT_OK, EXIT_ERROR, EXIT_INCONCLUSIVE = 0, 1, 2

_RATIONAL = {
    "anyOf": [
        {"type": "integer"},
        {"type": "string", "pattern": r"^\s*[+-]?(\d+(\.\d*)?|\.\d+)(/\d+)?\s*$"},
    ]
}
_COEFF = {"anyOf": [_RATIONAL, {"type": "number"}]}

SCHEMA = {
    "type": "object",
    "required": ["support"],
    "additionalProperties": False,
    "properties": {
        "support": {
            "type": "object",
            "required": ["points"],
            "additionalProperties": False,
            "properties": {
                "points": {"type": "array", "minItems": 1,
                           "items": {"type": "array", "minItems": 1, "items": _RATIONAL}},
            },
        },
        "x": {
            "type": "object",
            "required": ["A", "b"],
            "additionalProperties": False,
            "properties": {
                "A": {"type": "array", "items": {"type": "array", "items": _RATIONAL}},
                "b": {"type": "array", "items": _RATIONAL},
            },
        },
        "coeffs": {"type": "array", "items": _COEFF},
        "witnesses": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["beta", "nu"],
                "additionalProperties": False,
                "properties": {"beta": {"type": "integer", "minimum": 0},
                               "nu": {"type": "array", "items": _COEFF}},
            },
        },
        "tol": {"type": "number", "exclusiveMinimum": 0},
        "snap_radius": {"type": "number", "exclusiveMinimum": 0},
    },
}


class ProblemError(ValueError):
    """Invalid problem document; ``pointer`` is a JSON pointer into it."""

    def __init__(self, message: str, pointer: str = ""):
        super().__init__(message)
        self.pointer = pointer


def _pointer(path: Sequence) -> str:
    return "".join("/" + str(p).replace("~", "~0").replace("/", "~1") for p in path)


def _coeff(v):
    return float(v) if isinstance(v, float) else ex.to_fraction(v)


@dataclass(frozen=True)
class ProblemSpec:
    support: Support
    x: Optional[HPolyhedron]
    coeffs: Optional[tuple]
    witnesses: tuple
    tol: float
    snap_radius: float

    def signomial(self) -> Signomial:
        if self.coeffs is None:
            raise ProblemError("this command needs coefficients", "/coeffs")
        return Signomial(self.support, self.coeffs)

    def domain(self) -> HPolyhedron:
        if self.x is None:
            raise ProblemError("this command needs a domain X", "/x")
        return self.x


def parse_problem(text: str) -> ProblemSpec:
    """Validate and load a problem document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ProblemError(f"invalid JSON: {e}") from None
    errors = sorted(jsonschema.Draft202012Validator(SCHEMA).iter_errors(doc),
                    key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        e = errors[0]
        raise ProblemError(e.message, _pointer(e.absolute_path))

    points = [ex.vector(p) for p in doc["support"]["points"]]
    n = len(points[0])
    seen = {}
    for i, p in enumerate(points):
        if len(p) != n:
            raise ProblemError(f"point has dimension {len(p)}, expected {n}", f"/support/points/{i}")
        if p in seen:
            raise ProblemError(f"duplicate of point {seen[p]}", f"/support/points/{i}")
        seen[p] = i
    support = Support(points)

    x = None
    if "x" in doc:
        A, b = doc["x"]["A"], doc["x"]["b"]
        if len(A) != len(b):
            raise ProblemError(f"A has {len(A)} rows but b has {len(b)} entries", "/x/b")
        for i, row in enumerate(A):
            if len(row) != n:
                raise ProblemError(f"row has {len(row)} entries, expected {n}", f"/x/A/{i}")
        x = HPolyhedron(A, b, n)

    coeffs = None
    if "coeffs" in doc:
        if len(doc["coeffs"]) != support.m:
            raise ProblemError(f"expected {support.m} coefficients", "/coeffs")
        coeffs = tuple(_coeff(v) for v in doc["coeffs"])

    witnesses = []
    for i, w in enumerate(doc.get("witnesses", [])):
        if len(w["nu"]) != support.m:
            raise ProblemError(f"expected {support.m} entries", f"/witnesses/{i}/nu")
        if w["beta"] >= support.m:
            raise ProblemError("beta out of range", f"/witnesses/{i}/beta")
        witnesses.append(AGEWitness(w["beta"], [_coeff(v) for v in w["nu"]]))

    return ProblemSpec(support, x, coeffs, tuple(witnesses),
                       float(doc.get("tol", DEFAULT_TOL)),
                       float(doc.get("snap_radius", DEFAULT_SNAP_RADIUS)))


# --------------------------------------------------------------------------
# commands

def _grid(spec: ProblemSpec, grid: Optional[str]):
    if grid is None:
        return None
    try:
        lo, hi, res = grid.split(":")
        lo, hi, res = float(lo), float(hi), int(res)
    except ValueError:
        raise ProblemError(f"--grid expects LO:HI:N, got {grid!r}") from None
    value, arg = grid_min(spec.signomial(), [(lo, hi)] * spec.support.n, res)
    return {"min": value, "argmin": list(arg)}


def cmd_circuits(spec, args):
    cs = enumerate_circuits(spec.support, spec.domain(), args.beta)
    return {"circuits": [sz.circuit_to_json(c) for c in cs]}, EXIT_OK


def cmd_reduced(spec, args):
    r = reduce(enumerate_circuits(spec.support, spec.domain()), spec.support.m)
    return {"reduced": sz.reduced_to_json(r)}, EXIT_OK


def cmd_age_check(spec, args):
    f = spec.signomial()
    checks = []
    for w in spec.witnesses:
        lam, scale = nu_to_lambda(w)
        checks.append({"beta": w.beta, "nu": sz.vec(w.nu),
                       "relative_entropy": check_relent_certificate(f, w, spec.domain(), spec.tol),
                       "lambda": sz.vec(lam), "scale": sz.scalar(scale)})
    if args.circuit_index is not None:
        cs = enumerate_circuits(spec.support, spec.domain())
        if not 0 <= args.circuit_index < len(cs):
            raise ProblemError(f"circuit index {args.circuit_index} out of range (0..{len(cs) - 1})")
        c = cs[args.circuit_index]
        checks.append({**sz.circuit_to_json(c), "lambda_witnessed": lambda_age_check(f, c, spec.tol)})
    if not checks:
        raise ProblemError("age-check needs witnesses or --circuit-index", "/witnesses")
    passed = all(v for ch in checks for k, v in ch.items()
                 if k in ("relative_entropy", "lambda_witnessed"))
    return {"checks": checks, "passed": passed}, EXIT_OK


def _membership(spec, args):
    f = spec.signomial()
    r = reduce(enumerate_circuits(spec.support, spec.domain()), spec.support.m)
    return f, r, sage_membership(f, r, spec.tol)


def cmd_sage_check(spec, args):
    _, _, res = _membership(spec, args)
    out = sz.result_to_json(res)
    grid = _grid(spec, args.grid)
    if grid is not None:
        out["grid"] = grid
    return out, EXIT_INCONCLUSIVE if res.status is Status.INCONCLUSIVE else EXIT_OK


def cmd_decompose(spec, args):
    f, r, res = _membership(spec, args)
    out = sz.result_to_json(res)
    if res.status is Status.MEMBER and f.exact and res.decomposition.terms:
        approx = [AGEWitness(c.beta, [-cv[c.beta] * l for l in c.lam])
                  for c, cv in res.decomposition.terms if cv[c.beta] < 0]
        try:
            dec = refine_certificate(f, approx, list(r), spec.snap_radius, spec.tol)
        except CertificateError as e:
            out["refinement"] = {"error": str(e)}
        else:
            out.update(sz.decomposition_to_json(dec))
    return out, EXIT_INCONCLUSIVE if res.status is Status.INCONCLUSIVE else EXIT_OK


def cmd_refine(spec, args):
    f = spec.signomial()
    if not spec.witnesses:
        raise ProblemError("refine needs witnesses", "/witnesses")
    cs = enumerate_circuits(spec.support, spec.domain())
    dec = refine_certificate(f, list(spec.witnesses), cs, spec.snap_radius, spec.tol)
    return {"status": Status.MEMBER.value, **sz.decomposition_to_json(dec)}, EXIT_OK


def cmd_univariate(spec, args):
    if spec.support.n != 1:
        raise ProblemError("univariate needs one-dimensional points", "/support/points")
    order = sorted(range(spec.support.m), key=lambda i: spec.support.points[i][0])
    if order != list(range(spec.support.m)):
        raise ProblemError("univariate needs points in increasing order", "/support/points")
    a = SortedAlphas([p[0] for p in spec.support.points])
    out = {"circuits": [sz.circuit_to_json(c) for c in univariate_circuits(a)],
           "reduced": [sz.circuit_to_json(c) for c in univariate_reduced(a)]}
    if spec.coeffs is not None:
        out["classification"] = classify_extreme(spec.signomial(), a, tol=spec.tol).value
    return out, EXIT_OK


def cmd_separate(spec, args):
    r = reduce(enumerate_circuits(spec.support, spec.domain()), spec.support.m)
    i = args.circuit_index if args.circuit_index is not None else 0
    if not 0 <= i < len(r):
        raise ProblemError(f"reduced circuit index {i} out of range (0..{len(r) - 1})")
    target = r.circuits[i]
    y = minimality_witness(r, target)
    z = separating_functional(y, target)
    u = functional_form(target)(y)
    value = sum(zi * math.exp(float(yi)) for zi, yi in zip(z, y))
    return {"circuit": sz.circuit_to_json(target), "y": sz.vec(y), "u": sz.scalar(u),
            "z": list(z), "z_dot_exp_y": value, "expected": 1 - math.exp(-float(u))}, EXIT_OK


COMMANDS = {
    "circuits": cmd_circuits,
    "reduced": cmd_reduced,
    "age-check": cmd_age_check,
    "sage-check": cmd_sage_check,
    "decompose": cmd_decompose,
    "refine": cmd_refine,
    "univariate": cmd_univariate,
    "separate": cmd_separate,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sagecircuits",
                                description="Sublinear circuits and SAGE certificates.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("problem", help="problem JSON file, or - for stdin")
        sp.add_argument("--tol", type=float, default=None,
                        help=f"log-domain tolerance (default {DEFAULT_TOL:g})")
        sp.add_argument("--snap-radius", type=float, default=None,
                        help=f"snap radius for refinement (default {DEFAULT_SNAP_RADIUS:g})")
        sp.add_argument("--beta", type=int, default=None, help="restrict circuits to one negative index")
        sp.add_argument("--circuit-index", type=int, default=None,
                        help="index into the (reduced) circuit list")
        sp.add_argument("--grid", default=None, metavar="LO:HI:N",
                        help="also report the grid minimum over [LO,HI]^n with N points per axis")
    return p


def run(command: str, spec: ProblemSpec, args: argparse.Namespace):
    """Execute one command; returns ``(json_object, exit_code)``."""
    return COMMANDS[command](spec, args)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = sys.stdin.read() if args.problem == "-" else open(args.problem, encoding="utf-8").read()
        spec = parse_problem(text)
        overrides = {}
        if args.tol is not None:
            overrides["tol"] = args.tol
        if args.snap_radius is not None:
            overrides["snap_radius"] = args.snap_radius
        if overrides:
            spec = ProblemSpec(**{**spec.__dict__, **overrides})
        out, code = run(args.command, spec, args)
    except ProblemError as e:
        print(sz.dumps({"error": {"message": str(e), "pointer": e.pointer}}))
        return EXIT_ERROR
    except (OSError, ValueError, IndexError, SupportError, EmptyPolyhedronError) as e:
        print(sz.dumps({"error": {"message": str(e), "pointer": ""}}))
        return EXIT_ERROR
    print(sz.dumps(out))
    return code


if __name__ == "__main__":
    sys.exit(main())
