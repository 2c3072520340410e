import json
import math
import subprocess
import sys
from fractions import Fraction as F

import pytest

from sagecircuits import serialize as sz
from sagecircuits.circuits import Circuit
from sagecircuits.cli import ProblemError, main, parse_problem

HALF = {"A": [["-1"]], "b": ["0"]}
POINTS = {"points": [[0], [1], [2]]}


def write(tmp_path, doc, name="p.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def call(capsys, argv):
    code = main(argv)
    return code, json.loads(capsys.readouterr().out)


def test_scalar_encoding():
    assert sz.scalar(F(1, 2)) == "1/2" and sz.scalar(3) == "3"
    assert sz.dumps([0.1, float("inf")]) == "[0.10000000000000001, null]"
    c = Circuit((F(1, 2), -1, F(1, 2)), 1, 0)
    assert sz.circuit_from_json(sz.circuit_to_json(c)) == c


def test_dumps_deterministic():
    obj = {"b": [1.5, {"x": []}], "a": {}}
    assert sz.dumps(obj) == sz.dumps(obj)
    assert json.loads(sz.dumps(obj)) == {"b": [1.5, {"x": []}], "a": {}}


@pytest.mark.parametrize("doc,pointer", [
    ({"support": {"points": [[0], [0]]}}, "/support/points/1"),
    ({"support": {"points": [[0], [1, 2]]}}, "/support/points/1"),
    ({"support": POINTS, "x": {"A": [["-1"]], "b": []}}, "/x/b"),
    ({"support": POINTS, "x": {"A": [["-1", 0]], "b": [0]}}, "/x/A/0"),
    ({"support": POINTS, "coeffs": [1, 2]}, "/coeffs"),
    ({"support": POINTS, "coeffs": [1, "x", 2]}, "/coeffs/1"),
    ({"support": POINTS, "witnesses": [{"beta": 5, "nu": [1, 2, 3]}]}, "/witnesses/0/beta"),
    ({"support": POINTS, "extra": 1}, ""),
    ({}, ""),
])
def test_parse_errors(doc, pointer):
    with pytest.raises(ProblemError) as e:
        parse_problem(json.dumps(doc))
    assert e.value.pointer == pointer


def test_parse_invalid_json():
    with pytest.raises(ProblemError):
        parse_problem("{")


def test_parse_keeps_float_and_rational():
    spec = parse_problem(json.dumps({"support": POINTS, "coeffs": [1, "-2/3", 0.5]}))
    assert spec.coeffs == (1, F(-2, 3), 0.5) and isinstance(spec.coeffs[2], float)


def test_circuits_command(tmp_path, capsys):
    code, out = call(capsys, ["circuits", write(tmp_path, {"support": POINTS, "x": HALF})])
    assert code == 0
    assert len(out["circuits"]) == 4
    assert {"lambda": ["1/2", "-1", "1/2"], "beta": 1, "sigma": "0"} in out["circuits"]


def test_reduced_command_has_witnesses(tmp_path, capsys):
    code, out = call(capsys, ["reduced", write(tmp_path, {"support": POINTS, "x": HALF})])
    assert code == 0 and len(out["reduced"]) == 2
    assert all("witness" in r for r in out["reduced"])


def test_sage_check_and_grid(tmp_path, capsys):
    doc = {"support": POINTS, "x": HALF, "coeffs": [1, -2.2, 1]}
    code, out = call(capsys, ["sage-check", write(tmp_path, doc), "--grid", "0:1:10001"])
    assert code == 0 and out["status"] == "NOT_MEMBER"
    assert out["slack"] < 0 and out["grid"]["min"] == pytest.approx(-0.21, abs=1e-6)


def test_decompose_exact(tmp_path, capsys):
    doc = {"support": [[0], [1], [2], [3]], "x": HALF, "coeffs": [0, 0, -1, 1]}
    doc["support"] = {"points": doc["support"]}
    code, out = call(capsys, ["decompose", write(tmp_path, doc)])
    assert code == 0 and out["status"] == "MEMBER" and out["exact"] is True
    total = [sum(F(t["coeffs"][i]) for t in out["terms"]) + F(out["residual"][i]) for i in range(4)]
    assert total == [0, 0, -1, 1]


def test_refine_command(tmp_path, capsys):
    doc = {"support": POINTS, "x": HALF, "coeffs": [1, -2, 1],
           "witnesses": [{"beta": 1, "nu": [0.999, -2.001, 1.002]}]}
    code, out = call(capsys, ["refine", write(tmp_path, doc)])
    assert code == 0 and out["exact"] is True
    assert out["terms"][0]["coeffs"] == ["1", "-2", "1"]


def test_refine_failure_is_error(tmp_path, capsys):
    doc = {"support": POINTS, "x": HALF, "coeffs": [1, -3, 1],
           "witnesses": [{"beta": 1, "nu": [1, -2, 1]}]}
    code, out = call(capsys, ["refine", write(tmp_path, doc)])
    assert code == 1 and "error" in out


def test_age_check_command(tmp_path, capsys):
    doc = {"support": POINTS, "x": HALF, "coeffs": [1, -2, 1],
           "witnesses": [{"beta": 1, "nu": [1, -2, 1]}]}
    code, out = call(capsys, ["age-check", write(tmp_path, doc), "--circuit-index", "0"])
    assert code == 0 and out["checks"][0]["relative_entropy"] is True
    assert out["checks"][0]["lambda"] == ["1/2", "-1", "1/2"]


def test_univariate_command(tmp_path, capsys):
    doc = {"support": POINTS, "coeffs": [1, -2, 1]}
    code, out = call(capsys, ["univariate", write(tmp_path, doc)])
    assert code == 0 and out["classification"] == "TYPE3"
    assert len(out["circuits"]) == 4 and len(out["reduced"]) == 2


def test_separate_command(tmp_path, capsys):
    code, out = call(capsys, ["separate", write(tmp_path, {"support": POINTS, "x": HALF}),
                              "--circuit-index", "1"])
    assert code == 0
    assert out["z_dot_exp_y"] == pytest.approx(out["expected"], rel=1e-9)
    assert out["expected"] < 0


def test_missing_domain_and_file(tmp_path, capsys):
    code, out = call(capsys, ["circuits", write(tmp_path, {"support": POINTS})])
    assert code == 1 and out["error"]["pointer"] == "/x"
    code, out = call(capsys, ["circuits", str(tmp_path / "absent.json")])
    assert code == 1


def test_output_is_deterministic(tmp_path, capsys):
    path = write(tmp_path, {"support": {"points": [[0, 0], [1, 0], [0, 1], [1, 1]]},
                            "x": {"A": [[-1, 0], [0, -1]], "b": [0, 0]}})
    main(["reduced", path])
    first = capsys.readouterr().out
    main(["reduced", path])
    assert capsys.readouterr().out == first


def test_module_entry_point_stdin():
    doc = json.dumps({"support": POINTS, "x": HALF})
    proc = subprocess.run([sys.executable, "-m", "sagecircuits", "circuits", "-"], input=doc,
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert len(json.loads(proc.stdout)["circuits"]) == 4


def test_duplicate_reported_at_later_index():
    with pytest.raises(ProblemError) as e:
        parse_problem(json.dumps({"support": {"points": [[0], [1], [1]]}}))
    assert e.value.pointer == "/support/points/2"


def test_published_schema_matches():
    from pathlib import Path
    from sagecircuits.cli import SCHEMA
    doc = Path(__file__).resolve().parent.parent / "docs" / "problem.schema.json"
    assert json.loads(doc.read_text()) == SCHEMA


@pytest.mark.parametrize("coeffs", [[1, -2, 1], [3, -1, 1], [1, -1.5, 1]])
def test_emitted_certificates_revalidate(tmp_path, capsys, coeffs):
    from sagecircuits.certify import lambda_age_check
    doc = {"support": POINTS, "x": HALF, "coeffs": coeffs}
    code, out = call(capsys, ["sage-check", write(tmp_path, doc)])
    assert code == 0 and out["status"] == "MEMBER"
    total = [float(F(r)) if isinstance(r, str) else r for r in out["residual"]]
    assert min(total) >= 0
    for t in out["terms"]:
        cv = [float(F(v)) if isinstance(v, str) else v for v in t["coeffs"]]
        assert lambda_age_check(cv, sz.circuit_from_json(t), 1e-8)
        total = [a + b for a, b in zip(total, cv)]
    assert total == pytest.approx([float(v) for v in coeffs], abs=1e-8)


def test_exact_certificate_revalidates(tmp_path, capsys):
    from sagecircuits.certify import lambda_age_check
    doc = {"support": {"points": [[0], [1], [2], [3]]}, "x": HALF, "coeffs": ["1/2", -1, 0, 1]}
    code, out = call(capsys, ["decompose", write(tmp_path, doc)])
    assert code == 0 and out["exact"] is True
    for t in out["terms"]:
        # boundary values are irrational in general, so the log residual is small but not zero
        assert lambda_age_check([F(v) for v in t["coeffs"]], sz.circuit_from_json(t), 1e-12)
    total = [F(r) for r in out["residual"]]
    for t in out["terms"]:
        total = [a + F(b) for a, b in zip(total, t["coeffs"])]
    assert total == [F(1, 2), -1, 0, 1]
