"""Tests for the command-line surface."""
import io
import json

import pytest

from janus.cli import run
from janus.models.params import JanusSpec, SqueezeParam


@pytest.fixture
def invoke(tmp_path):
    """Run the CLI against an empty config; returns (exit code, stdout text)."""

    def _invoke(*argv):
        out = io.StringIO()
        code = run(["--config", str(tmp_path / "missing.json"), *argv], out=out)
        return code, out.getvalue()

    return _invoke


@pytest.fixture
def coherent_spec(tmp_path):
    path = tmp_path / "coherent.json"
    JanusSpec.single(SqueezeParam(0.0), alpha=1.5).save(path)
    return path


def test_gk_on_coherent_spec(invoke, coherent_spec):
    code, text = invoke("gk", "--spec", str(coherent_spec), "--k", "2")
    assert code == 0
    data = json.loads(text)
    assert data["k"] == 2
    assert data["value"] == pytest.approx(1.0)
    assert "branch_residual" in data


def test_flags_override_spec_file(invoke, coherent_spec):
    code, text = invoke("moments", "--spec", str(coherent_spec), "--k", "1", "--alpha-re", "2.0")
    assert code == 0
    assert json.loads(text)["value"] == pytest.approx(4.0)


def test_moments_oracle(invoke):
    code, text = invoke(
        "moments", "--k", "2", "--r", "0.6", "--s", "0.6", "--phi", "3.14159",
        "--eta-re", "-1", "--alpha-re", "0.5", "--oracle",
    )
    assert code == 0
    data = json.loads(text)
    assert data["abs_diff"] < 1e-8
    assert data["oracle_value"] == pytest.approx(data["value"], rel=1e-8)


def test_dump_spec_round_trip(invoke, tmp_path):
    dumped = tmp_path / "dumped.json"
    args = ["gk", "--k", "3", "--r", "0.4", "--theta", "1.0", "--alpha-im", "0.8"]
    code, first = invoke(*args, "--dump-spec", str(dumped))
    assert code == 0
    code, second = invoke("gk", "--k", "3", "--spec", str(dumped))
    assert code == 0
    assert first == second


def test_gsp_table(invoke):
    code, text = invoke("gsp", "table", "--max", "2")
    assert code == 0
    lines = text.splitlines()
    assert lines[0] == "p,q,coeffs"
    assert "2,2,0;1;2" in lines
    assert len(lines) == 1 + 5


def test_gsp_eval_with_series(invoke):
    code, text = invoke("gsp", "eval", "--p", "2", "--q", "2", "--z-re", "0.3", "--series")
    assert code == 0
    data = json.loads(text)
    assert data["value_re"] == pytest.approx((2 * 0.09 + 0.3) / 0.7**2.5)
    assert data["abs_diff"] < 1e-12


def test_wigner_writes_grid_and_summary(invoke, tmp_path):
    target = tmp_path / "w.csv"
    code, text = invoke(
        "wigner", "--r", "0.3", "--extent", "5", "--step", "0.1", "--out", str(target)
    )
    assert code == 0
    summary = json.loads(text)
    assert summary["integral"] == pytest.approx(1.0, abs=1e-6)
    rows = target.read_text(encoding="utf-8").splitlines()
    assert rows[0] == "q,p,W"
    assert len(rows) == 1 + 101 * 101


def test_wigner_decompose(invoke, tmp_path):
    target = tmp_path / "w.csv"
    code, text = invoke(
        "wigner", "--r", "0.2", "--s", "0.2", "--phi", "3.14159", "--eta-re", "-1",
        "--extent", "5", "--step", "0.25", "--decompose", "--out", str(target),
    )
    assert code == 0
    assert set(json.loads(text)) == {"mixture", "interference", "total"}
    for name in ("mixture", "interference", "total"):
        assert (tmp_path / f"w_{name}.csv").exists()


def test_qfi_dphase(invoke):
    code, text = invoke("qfi", "--alpha-re", "1.5", "--parameter", "dphase")
    assert code == 0
    data = json.loads(text)
    assert data == {
        "parameter": "displacement_phase",
        "method": "variance_formula",
        "value": pytest.approx(9.0),
        "sensitivity": None,
    }


def test_qfi_gsq_oracle(invoke):
    code, text = invoke("qfi", "--r", "0.5", "--parameter", "gsq", "--oracle")
    assert code == 0
    assert json.loads(text)["abs_diff"] < 1e-9


def test_scan_to_file(invoke, tmp_path):
    target = tmp_path / "scan.csv"
    code, text = invoke(
        "scan", "--quantity", "gk:2", "--axis1", "alpha_mag:0.5:2:4", "--r", "1.0",
        "--no-meta", "--out", str(target),
    )
    assert code == 0
    assert text == ""
    lines = target.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "alpha_mag,gk:2"
    assert len(lines) == 5


def test_usage_errors_exit_1(invoke, capsys):
    assert invoke("frobnicate")[0] == 1
    assert invoke("gk")[0] == 1
    assert invoke("gk", "--k", "2", "--r", "-1")[0] == 1
    assert invoke("scan", "--quantity", "gk:2", "--axis1", "r:0:1:1")[0] == 1
    assert "InvalidParameter" in capsys.readouterr().err


def test_missing_spec_file_exit_1(invoke, tmp_path):
    assert invoke("gk", "--k", "2", "--spec", str(tmp_path / "nope.json"))[0] == 1


def test_computational_error_exit_2(invoke, capsys):
    code, _ = invoke("gk", "--k", "2")
    assert code == 2
    assert "VacuumState" in capsys.readouterr().err


def test_help_exits_0(invoke):
    assert invoke("--help")[0] == 0
