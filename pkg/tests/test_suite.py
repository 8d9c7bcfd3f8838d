import json

import pytest

from tspacekit.suite import CHECKS, DESCRIPTIONS, FAIL, PASS, SKIPPED, reports_json, run_check, run_suite, select


def test_registry_complete():
    assert list(CHECKS) == [f"C{k}" for k in range(1, 16)]
    assert set(DESCRIPTIONS) == set(CHECKS)


def test_select():
    assert select(["c3", "C1", "C2-C4"]) == ["C1", "C2", "C3", "C4"]
    assert select(None) == sorted(CHECKS, key=lambda c: int(c[1:]))
    with pytest.raises(KeyError):
        select(["C99"])


def test_first_two_checks_pass_at_three():
    reports = run_suite(["C1", "C2"], (3,))
    assert [r.id for r in reports] == ["C1", "C2"]
    assert all(r.status == PASS for r in reports)


@pytest.mark.parametrize("cid", [c for c in CHECKS if c != "C14"])
@pytest.mark.parametrize("p", [2, 3, 5])
def test_every_check_passes_or_skips(cid, p):
    r = run_check(cid, p)
    assert r.status in (PASS, SKIPPED), r.detail
    if r.status == PASS:
        assert r.residual_terms == 0


@pytest.mark.parametrize("p", [3, 5])
def test_h_odd_check(p):
    r = run_check("C14", p)
    assert r.status == PASS, r.detail


def test_skips_in_characteristic_two():
    for cid in ("C14", "C15"):
        r = run_check(cid, 2)
        assert r.status == SKIPPED and r.detail


def test_end_to_end_prints_basis():
    r = run_check("C15", 3)
    text = "\n".join(r.detail)
    assert "I=[1, 3, 6] -> J=[1, 2, 3]" in text
    assert "basis: H(1), H(3), H(6)" in text
    assert "basis: H(1), H(2)" in text
    s = run_check("C5", 3)
    assert "basis: S(2,1), S(2,3), S(2,6)" in "\n".join(s.detail)


def test_json_stream_is_stable():
    reports = run_suite(["C2", "C7"], (3,))
    lines = reports_json(reports).splitlines()
    assert len(lines) == 2
    for line in lines:
        doc = json.loads(line)
        assert list(doc) == sorted(doc)
        assert set(doc) == {"id", "params", "status", "residual_terms", "witness_ref", "ms"}
    assert json.loads(lines[1])["witness_ref"].endswith(reports[1].witness.digest())


def test_failure_carries_residual(monkeypatch):
    from tspacekit import certs, suite
    from tspacekit.freealg import Poly

    real = certs.cert_sp_in_h1

    def broken(p):
        c = real(p)
        return c.with_target(c.target + Poly.var(9, p))

    monkeypatch.setattr(suite.certs, "cert_sp_in_h1", broken)
    r = run_check("C7", 3)
    assert r.status == FAIL and r.residual_terms == 1
    assert "FAILED" in r.detail[0]
