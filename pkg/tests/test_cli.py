import io
import json
import subprocess
import sys

import pytest

from tspacekit.cli import dispatch
from tspacekit.tspace import Certificate, SpanSpec, check_certificate


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = dispatch(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_expand_golden():
    code, out, _ = run("expand", "--p", "2", "--expr", "(x1+x2)^2")
    assert code == 0
    assert out.strip() == "x1.x1 + x1.x2 + x2.x1 + x2.x2"


def test_expand_json():
    code, out, _ = run("expand", "--p", "5", "--expr", "[x1, x2]", "--format", "json")
    assert json.loads(out) == {"p": 5, "poly": "x1.x2 + 4*x2.x1", "terms": 2}


def test_default_modulus_from_environment(monkeypatch):
    monkeypatch.setenv("TSPACEKIT_P", "5")
    assert run("expand", "--expr", "6*x1")[1].strip() == "x1"
    monkeypatch.setenv("TSPACEKIT_P", "6")
    assert run("expand", "--expr", "x1")[0] == 2


def test_reduce_text():
    code, out, _ = run("reduce", "--sequence", "1,3,6", "--p", "3")
    assert code == 0
    assert "J = {1, 2, 3}" in out
    assert "H(6) = x1.x1.x1.x2.x2.x2" in out
    assert "basis (3)" in out


def test_reduce_json_family():
    code, out, _ = run("reduce", "--family", "odd", "--length", "6", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["positions"] == [1, 2] and doc["covered"]
    assert [b["generator"] for b in doc["basis"]] == ["H(1)", "H(3)"]
    assert doc["derivation"]["11"][-1] == "11 = 3 + 4*(3 - 1)"


def test_reduce_s_basis():
    code, out, _ = run("reduce", "--sequence", "2,5,7,11", "--basis", "s", "--d", "2", "--format", "json")
    doc = json.loads(out)
    assert [b["generator"] for b in doc["basis"]] == ["S(2,2)", "S(2,5)", "S(2,7)"]


def test_verify_json():
    code, out, _ = run("verify", "--checks", "C1,C2", "--p", "3", "--format", "json")
    lines = [json.loads(l) for l in out.splitlines()]
    assert code == 0
    assert [(d["id"], d["status"]) for d in lines] == [("C1", "pass"), ("C2", "pass")]


def test_verify_failure_exit_code(monkeypatch):
    from tspacekit import suite
    from tspacekit.suite import CheckReport

    monkeypatch.setitem(suite.CHECKS, "C1", lambda p, long=False: CheckReport("C1", {"p": p}, "fail"))
    assert run("verify", "--checks", "C1")[0] == 1


def test_member_yes_with_certificate():
    code, out, _ = run("member", "--p", "3", "--expr", "S(3; x1, x2, x3)", "--tspace", "S(2)", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["answer"] == "yes"
    cert = Certificate.from_json(doc["certificate"])
    assert check_certificate(cert, SpanSpec.parse("S(2)")).ok


def test_member_unknown():
    code, out, _ = run("member", "--p", "2", "--expr", "S(3; x1, x2, x3)", "--tspace", "S(2)")
    assert code == 1 and out.startswith("unknown")


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate"],
    ["expand", "--p", "4", "--expr", "x1"],
    ["expand", "--expr", "x1 +"],
    ["reduce"],
    ["reduce", "--sequence", "3,2"],
    ["reduce", "--sequence", "1,x"],
    ["reduce", "--family", "odd"],
    ["reduce", "--sequence", "1,2", "--family", "odd", "--length", "3"],
    ["verify", "--checks", "C42"],
    ["member", "--expr", "x1", "--tspace", "Q(1)"],
    ["member", "--expr", "0", "--tspace", "S(2)"],
    ["member", "--expr", "x1", "--tspace", "S(2)", "--limits", "speed=1"],
])
def test_usage_errors(argv):
    code, _, err = run(*argv)
    assert code == 2
    assert err.startswith("error:")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "tspacekit", "expand", "--p", "2", "--expr", "(x1+x2)^2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.strip() == "x1.x1 + x1.x2 + x2.x1 + x2.x2"
