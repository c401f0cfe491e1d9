import json
from pathlib import Path

import jsonschema
import pytest

from coblekit import cli
from coblekit.report import VerificationReport

ROOT = Path(__file__).resolve().parents[1]


def test_list(capsys):
    assert cli.main(["verify", "--list"]) == 0
    names = capsys.readouterr().out.split()
    assert names == list(cli.REGISTRY)
    prefixes = {n.split(".")[0] for n in names}
    assert prefixes == {"quintic", "ab33", "cs", "groups", "scan"}


def test_unknown_check_exit_2(capsys):
    assert cli.main(["verify", "--check", "nosuch"]) == 2
    assert "unknown check" in capsys.readouterr().err


def test_invalid_prime_exit_2(capsys):
    assert cli.main(["verify", "--check", "ab33.burkhardt", "--prime", "8"]) == 2
    assert cli.main(["verify", "--check", "ab33.burkhardt", "--prime", "3"]) == 2


def test_burkhardt_zero_polynomial(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert cli.main(["verify", "--check", "ab33.burkhardt", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    jsonschema.validate(data, cli.report_schema())
    assert data[0]["status"] == "pass"
    assert {"label": "Burkhardt identity", "certificate": "zero polynomial"} in data[0]["witnesses"]


def test_prefix_selection():
    assert cli._select(["groups."]) == [n for n in cli.REGISTRY if n.startswith("groups.")]
    with pytest.raises(cli.UnknownCheck):
        cli._select(["nosuch."])


def _fake(status):
    def fn(p: int = 61, seed: int = 0):
        r = VerificationReport(f"fake.{status}", prime=p, seed=seed)
        if status == "fail":
            r.expect("synthetic", False, "witness")
        elif status == "inconclusive":
            r.inconclusive("synthetic", "no stabilization")
        return r
    return fn


@pytest.mark.parametrize("status,code", [("pass", 0), ("fail", 1), ("inconclusive", 3)])
def test_exit_codes(monkeypatch, tmp_path, status, code):
    monkeypatch.setitem(cli.REGISTRY, f"fake.{status}", _fake(status))
    out = tmp_path / "r.json"
    assert cli.main(["verify", "--check", f"fake.{status}", "--out", str(out), "--format", "json"]) == code
    data = json.loads(out.read_text())
    assert data[0]["status"] == status
    if status == "fail":
        assert data[0]["witnesses"][0]["witness"] == "witness"


def test_exception_becomes_failed_report(monkeypatch):
    def boom():
        raise ArithmeticError("no")
    monkeypatch.setitem(cli.REGISTRY, "fake.boom", boom)
    r = cli.run_check("fake.boom")
    assert r.status == "fail" and "ArithmeticError" in r.witnesses[0]["witness"]["exception"]


def test_options_forwarded(monkeypatch):
    seen = {}

    def fn(p: int = 61, seed: int = 0, workers: int = 1, budget: int = 1):
        seen.update(p=p, seed=seed, workers=workers, budget=budget)
        return VerificationReport("fake.opts", prime=p, seed=seed)
    monkeypatch.setitem(cli.REGISTRY, "fake.opts", fn)
    cli.run_check("fake.opts", prime=181, seed=5, workers=2, budget=10)
    assert seen == {"p": 181, "seed": 5, "workers": 2, "budget": 10}
    with pytest.raises(cli.InvalidOption):
        cli.run_check("fake.opts", workers=0)


def test_cs_hilbert_via_cli(check):
    rep = check("cs.hilbert", prime=61)
    assert rep.passed
    assert rep.to_json()["counts"]["values"]["61"][:7] == [1, 9, 45, 165, 495, 1287, 2999]


def test_export_cs_text(capsys):
    assert cli.main(["export", "--object", "cs", "--format", "text"]) == 0
    rows = capsys.readouterr().out.strip().splitlines()
    assert len(rows) == 5 and all(len(r.split()) == 9 for r in rows)
    assert rows[0].split()[0] == "z1^2"


def test_export_coble_hesse(capsys):
    assert cli.main(["export", "--object", "coble", "--c", "1,1,1,1"]) == 0
    from coblekit.polyring import MultiPoly, VarContext

    text = capsys.readouterr().out.strip()
    f = MultiPoly.parse(text, VarContext.of("z1..z9"))
    want = MultiPoly.parse(
        "z1^3+z2^3+z3^3+z4^3+z5^3+z6^3+z7^3+z8^3+z9^3"
        "-3*z1*z2*z3-3*z4*z5*z6-3*z7*z8*z9"
        "+z1*z4*z7+z2*z5*z8+z3*z6*z9+z1*z5*z9+z2*z6*z7+z3*z4*z8+z1*z6*z8+z2*z4*z9+z3*z5*z7",
        VarContext.of("z1..z9"))
    assert f == want


def test_export_needs_parameters(capsys):
    assert cli.main(["export", "--object", "phi"]) == 2
    assert cli.main(["export", "--object", "phi", "--c", "1,2"]) == 2
    assert cli.main(["export", "--object", "phi", "--c", "symbolic"]) == 0


def test_export_planes_and_points():
    planes = cli.export_object("planes")
    assert len(planes) == 120
    assert sorted({p["type"] for p in planes}) == [1, 2]
    assert sum(p["type"] == 1 for p in planes) == 12
    assert all(len(p["equations"]) == 6 for p in planes)
    pts = cli.export_object("points360")
    assert [sum(p["type"] == t for p in pts) for t in (1, 2, 3)] == [9, 108, 243]


def test_export_matrices():
    phi = cli.export_object("phi", "1,2,4,8")
    assert len(phi) == 9 and all(len(r) == 9 for r in phi)
    assert phi[0][0] == "0"
    psi = cli.export_object("psi", "1,2")
    assert len(psi) == 5
    assert len(cli.export_object("bhm")) == 3
    assert len(cli.export_object("jacobian", "1,2,4,8")) == 9


def test_enumerate_text(capsys):
    assert cli.main(["enumerate", "--what", "points360"]) == 0
    assert capsys.readouterr().out.strip().endswith("by type 1: 9, 2: 108, 3: 243")


def test_scan_small_prime(capsys):
    assert cli.main(["scan", "--job", "points360-smooth", "--prime", "7", "--include-degenerate"]) == 0


def test_scan_budget_guard(capsys):
    assert cli.main(["scan", "--job", "points360-smooth", "--budget", "1000"]) == 3


def test_published_schema_matches_package():
    doc = json.loads((ROOT / "docs" / "report_schema.json").read_text())
    assert doc == cli.report_schema()
