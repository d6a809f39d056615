import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from fptlevy.checks import CATALOG
from fptlevy.cli import main, parse_grid
from fptlevy.modelspec import dump_model


@pytest.fixture
def model_file(tmp_path):
    def write(name, text=None):
        path = tmp_path / f"{name}.json"
        path.write_text(text if text is not None else dump_model(CATALOG[name]))
        return str(path)

    return write


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def read_csv(text):
    lines = text.splitlines()
    headers = [json.loads(line[2:]) for line in lines if line.startswith("# ")]
    rows = list(csv.DictReader(io.StringIO("\n".join(line for line in lines if not line.startswith("# ")))))
    return headers, rows


class TestGrid:
    def test_list(self):
        np.testing.assert_array_equal(parse_grid("1,2,5"), [1, 2, 5])

    def test_linear(self):
        np.testing.assert_allclose(parse_grid("0:1:5"), [0, 0.25, 0.5, 0.75, 1])

    def test_log(self):
        np.testing.assert_allclose(parse_grid("log:1:100:3"), [1, 10, 100])

    def test_bad(self, capsys):
        code, _, err = run(capsys, "fpt", "--model", "x.json", "--b", 1, "--t", "a:b")
        assert code == 2 and "cannot parse grid" in err


class TestValidate:
    def test_stable(self, capsys, model_file):
        code, out, _ = run(capsys, "validate", "--model", model_file("stable"))
        doc = json.loads(out)
        assert code == 0
        assert doc["diagnostics"]["regime"] == "stable" and doc["diagnostics"]["alpha"] == 1.5
        assert doc["manifest"]["command"] == "validate"

    def test_compound_poisson_explained(self, capsys, model_file):
        code, out, _ = run(capsys, "validate", "--model", model_file("compound_poisson"))
        diag = json.loads(out)["diagnostics"]
        assert code == 0 and diag["density_conditions_ok"] is False
        assert any("no density" in note for note in diag["notes"])

    def test_malformed(self, capsys, model_file):
        code, _, err = run(capsys, "validate", "--model", model_file("bad", '{"sigma": 1,'))
        assert code == 2 and "malformed JSON" in err

    def test_unknown_field_line(self, capsys, model_file):
        path = model_file("bad", '{\n "sigma": 1,\n "vol": 2,\n "m": 0, "jumps": {"family": "none"}}')
        code, _, err = run(capsys, "validate", "--model", path)
        assert code == 2 and f"{path}:3:" in err


class TestFpt:
    def test_brownian_rows(self, capsys, model_file):
        code, out, _ = run(capsys, "fpt", "--model", model_file("brownian"), "--b", 1, "--t", "1,4,25")
        headers, rows = read_csv(out)
        assert code == 0
        assert headers[0]["command"] == "fpt" and headers[0]["parameters"]["b"] == 1.0
        assert float(rows[0]["p_b"]) == pytest.approx(0.241971, abs=5e-7)
        for row in rows:
            t = float(row["t"])
            assert float(row["ratio"]) == pytest.approx(math.exp(-1 / (2 * t)), rel=1e-9)

    def test_stable_ratio_decreasing(self, capsys, model_file):
        code, out, _ = run(capsys, "fpt", "--model", model_file("stable"), "--b", 1, "--t", "log:10:1000:3")
        ratios = [float(r["ratio"]) for r in read_csv(out)[1]]
        assert code == 0 and ratios[0] > ratios[1] > ratios[2] > 1

    def test_jsonl(self, capsys, model_file):
        code, out, _ = run(capsys, "fpt", "--model", model_file("brownian_drift"), "--b", 1, "--t", "10", "--format", "jsonl")
        first, row = [json.loads(line) for line in out.splitlines()]
        assert code == 0 and first["manifest"]["parameters"]["t"] == [10.0]
        assert first["asymptote"]["kind"] == "tilted"
        assert row["ratio"] == pytest.approx(math.exp(-0.05), rel=1e-9)

    def test_failed_hypothesis_column(self, capsys, model_file):
        path = model_file("neg", '{"sigma": 1, "m": -0.2, "jumps": {"family": "none"}}')
        code, out, _ = run(capsys, "fpt", "--model", path, "--b", 1, "--t", "2")
        headers, rows = read_csv(out)
        assert code == 0 and rows[0]["asymptote"] == "hypothesis-failed"
        assert "HypothesisError" in headers[1]["asymptote_note"]

    def test_explicit_regime_error(self, capsys, model_file):
        code, _, err = run(capsys, "fpt", "--model", model_file("brownian"), "--b", 1, "--t", "2", "--asymptote", "stable")
        assert code == 1 and "RegimeError" in err

    def test_no_density(self, capsys, model_file):
        code, _, err = run(capsys, "fpt", "--model", model_file("compound_poisson"), "--b", 1, "--t", "2")
        assert code == 1 and "NoDensityError" in err

    def test_output_file(self, capsys, model_file, tmp_path):
        out = tmp_path / "rows.csv"
        code, stdout, _ = run(capsys, "fpt", "--model", model_file("brownian"), "--b", 1, "--t", "1", "--out", out)
        assert code == 0 and stdout == ""
        assert out.read_text().startswith("# {")


class TestPrice:
    def test_brownian(self, capsys, model_file):
        code, out, _ = run(capsys, "price", "--model", model_file("brownian"), "--r", 0.05, "--K", 0.6, "--T", "20,60")
        headers, rows = read_csv(out)
        assert code == 0
        assert headers[0]["parameters"]["b"] == pytest.approx(0.5108, abs=1e-4)
        assert headers[0]["parameters"]["m_risk_neutral"] == pytest.approx(0.45)
        ratios = [float(r["ratio"]) for r in rows]
        assert ratios[0] < ratios[1] < 1

    def test_nonpositive_drift(self, capsys, model_file):
        path = model_file("low", '{"sigma": 0.2, "m": 0, "jumps": {"family": "none"}}')
        code, out, _ = run(capsys, "price", "--model", path, "--r", 0.05, "--K", 0.6, "--T", "5")
        rows = read_csv(out)[1]
        assert code == 0 and rows[0]["gap_asymptote"] == "hypothesis-failed"

    def test_bad_principal(self, capsys, model_file):
        code, _, _ = run(capsys, "price", "--model", model_file("brownian"), "--r", 0.05, "--K", 1.5, "--T", "5")
        assert code == 2

    def test_infeasible(self, capsys, model_file):
        code, _, err = run(capsys, "price", "--model", model_file("stable"), "--r", 0.05, "--K", 0.6, "--T", "5")
        assert code == 1 and "MartingaleInfeasibleError" in err


class TestSimulate:
    ARGS = ("--b", 1, "--n", 3000, "--dt", 0.01, "--seed", 7)

    def test_reproducible(self, capsys, model_file):
        path = model_file("brownian")
        outs = [run(capsys, "simulate", "--model", path, *self.ARGS)[1] for _ in range(2)]
        data = [[line for line in o.splitlines() if not line.startswith("#")] for o in outs]
        assert data[0] == data[1] and len(data[0]) > 500

    def test_report(self, capsys, model_file):
        code, out, _ = run(capsys, "simulate", "--model", model_file("brownian"), *self.ARGS)
        headers, rows = read_csv(out)
        report = headers[1]["report"]
        assert code == 0 and report["crossed"] == len(rows)
        assert report["crossed"] + report["censored"] == 3000
        assert 0 <= report["ks"] < 0.05

    def test_no_density_still_simulates(self, capsys, model_file):
        code, out, _ = run(capsys, "simulate", "--model", model_file("compound_poisson"), "--b", 0.2, "--n", 500, "--dt", 0.01)
        report = read_csv(out)[0][1]["report"]
        assert code == 0 and report["ks"] is None and "NoDensityError" in report["ks_note"]


class TestCheck:
    def test_single_model(self, capsys, model_file):
        code, out, _ = run(capsys, "check", "--model", model_file("brownian_drift"))
        doc = json.loads(out)
        assert code == 0 and doc["passed"] and doc["counts"]["fail"] == 0

    def test_only(self, capsys):
        code, out, _ = run(capsys, "check", "--only", "karamata_ratio", "convexity")
        doc = json.loads(out)
        assert code == 0
        assert {r["name"] for r in doc["results"]} == {"stable_constant", "karamata_ratio", "convexity"}


def test_module_entry_point(tmp_path):
    path = tmp_path / "b.json"
    path.write_text(dump_model(CATALOG["brownian"]))
    proc = subprocess.run(
        [sys.executable, "-m", "fptlevy", "fpt", "--model", str(path), "--b", "1", "--t", "1"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[2] == "t,p_b,err,asymptote,ratio"


def test_version(capsys):
    code, out, _ = run(capsys, "--version")
    assert code == 0 and out.strip()
