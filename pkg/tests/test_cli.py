import json
from pathlib import Path

import pytest

from heatcocycle.cli import EXIT_CONFIG, EXIT_FAIL, EXIT_OK, EXIT_TRUNCATION, main

ROOT = Path(__file__).resolve().parents[1]
CONFIGS = ROOT / "configs"
GOLDEN = Path(__file__).resolve().parent / "golden"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out.strip() else None), out.err


def test_todd_golden(capsys):
    code, report, _ = run(capsys, "todd", "--connection", CONFIGS / "n2.json", "--no-timings")
    assert code == EXIT_OK
    assert report == json.loads((GOLDEN / "todd_n2.json").read_text())


def test_jlo_winding(capsys):
    code, report, _ = run(capsys, "jlo", "--config", CONFIGS / "n1_winding.json")
    assert code == EXIT_OK
    res = report["result"]
    assert res["value"] == res["dR"] == "1*pi^(2/2)"
    assert res["naive"] == "0"
    assert "timings" in report


def test_jlo_surface_p3(capsys):
    code, report, _ = run(capsys, "jlo", "--config", CONFIGS / "n2_p3.json", "--no-timings")
    assert code == EXIT_OK
    assert report["result"]["value"] == report["result"]["dR"] == "-1/6*pi^(6/2)"


def test_output_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert main(["verify", "orders", "--quick", "--no-timings", "-o", str(path)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    assert "timings" not in json.loads(a.read_text())


def test_trace_expr(capsys):
    code, report, _ = run(capsys, "trace-expr", "--n", 1, "q^-1*psi1*psibar1", "--eps", 1, "--no-timings")
    assert code == EXIT_OK
    assert report["result"]["supertrace"] == "4*pi^(2/2)"
    assert report["truncation_audit"]["ok"]
    code, report, _ = run(capsys, "trace-expr", "--n", 1, "q^-1", "--no-timings")
    assert report["result"]["trace_series"] == {"-1": "4*pi^(2/2)"}


def test_contract_expr(capsys):
    code, report, _ = run(capsys, "contract-expr", "--n", 1, "dx1*dxi1", "--no-timings")
    assert code == EXIT_OK
    assert report["result"]["contraction"] == {"-2": "(-1)"}


def test_truncation_exit_code(capsys):
    code, report, err = run(capsys, "trace-expr", "--n", 1, "dx1*dxi1", "--n-trunc", 3)
    assert code == EXIT_TRUNCATION
    assert report is None and "truncation audit failed" in err


@pytest.mark.parametrize("config,fragment", [
    ({"n": 1, "p": 2, "functions": ["1", "1", "1"]}, "positive odd"),
    ({"n": 1, "p": 1, "functions": ["1"]}, "needs 2 functions"),
    ({"n": 1, "p": 1, "functions": ["1", "xi1"]}, "degree 0"),
    ({"n": 1, "p": 1, "functions": ["1", "x1"]}, "inside sin() or cos()"),
    ({"p": 1, "functions": ["1", "1"]}, "dimension"),
])
def test_config_errors(tmp_path, capsys, config, fragment):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(config))
    code, report, err = run(capsys, "jlo", "--config", path)
    assert code == EXIT_CONFIG
    assert fragment in err


def test_missing_and_malformed_files(tmp_path, capsys):
    code, _, err = run(capsys, "todd", "--connection", tmp_path / "nope.json")
    assert code == EXIT_CONFIG and "cannot read" in err
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    code, _, err = run(capsys, "todd", "--connection", bad)
    assert code == EXIT_CONFIG and "invalid JSON" in err
    code, _, err = run(capsys, "contract-expr", "--n", 0, "1")
    assert code == EXIT_CONFIG


def test_failed_check_exit_code(capsys, monkeypatch):
    from heatcocycle import forms

    monkeypatch.setattr(forms, "exterior_derivative", lambda a: forms.Form.const(a.n))
    code, report, _ = run(capsys, "todd", "--connection", CONFIGS / "n2.json")
    assert code == EXIT_FAIL
    assert report["passed"] is False
