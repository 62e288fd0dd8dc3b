from __future__ import annotations

import json
import math

import pytest

from envyline import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestGrid:
    def test_inclusive_with_snapping(self):
        pts = cli.parse_grid("1.1:2.0:0.01")
        assert pts[0] == 1.1 and pts[-1] == 2.0 and len(pts) == 91
        assert cli.parse_grid("0:1:0.3") == [0.0, 0.3, 0.6, 0.9, 1.0]
        assert cli.parse_grid("0.5") == [0.5]

    @pytest.mark.parametrize("text", ["a:b:c", "1:0:0.1", "0:1:0", "0:1", "0:1:0.1:2", "nan:1:0.1"])
    def test_bad(self, text):
        with pytest.raises(cli.CliUsageError):
            cli.parse_grid(text)


class TestSerialisation:
    def test_formats(self):
        assert cli.fmt_value(2.0) == "2" and cli.fmt_value(math.inf) == "inf"
        assert cli.fmt_value(1 / 3) == "0.333333333"
        assert cli.fmt_param(2.0) == "2.0" and cli.fmt_param(1.1000000000000001) == "1.1"

    def test_json_infinity(self):
        doc = json.loads(cli.dump_json({"pair": {"a": 1.0, "b": math.inf}, "x": 1 / 3}))
        assert doc == {"pair": {"a": 1.0, "b": None, "unbounded": True}, "x": 0.333333333}

    def test_timestamp(self, monkeypatch):
        monkeypatch.delenv("SOURCE_DATE_EPOCH", raising=False)
        assert cli.timestamp() == "1970-01-01T00:00:00Z"
        monkeypatch.setenv("SOURCE_DATE_EPOCH", "86400")
        assert cli.timestamp() == "1970-01-02T00:00:00Z"


class TestFrontier:
    def test_bim_rows(self, capsys):
        code, out, _ = run(capsys, "frontier", "--mech", "bim", "--alpha", "1.1:2.0:0.01")
        lines = out.splitlines()
        assert code == 0 and lines[0] == "mechanism,param,consistency,robustness"
        assert "bim,2.0,2,2" in lines and "bim,1.5,1.5,3" in lines

    def test_unbounded(self, capsys):
        _, out, _ = run(capsys, "frontier", "--mech", "bim", "--alpha", "1.0")
        assert out.splitlines()[1] == "bim,1.0,1,inf"

    def test_bam_marked_points(self, capsys):
        _, out, _ = run(capsys, "frontier", "--mech", "bam", "--c", "0.25:0.5:0.01")
        assert "bam,0.25,1.75,2.25" in out.splitlines() and "bam,0.5,1,2.5" in out.splitlines()

    def test_file_with_sidecar(self, capsys, tmp_path):
        path = tmp_path / "f.csv"
        code, _, _ = run(capsys, "frontier", "--mech", "bim", "--mech", "balrm", "--alpha", "1.5", "--c", "0.1", "-o", str(path))
        assert code == 0
        text = path.read_bytes()
        assert b"\r" not in text and text.endswith(b"\n")
        meta = json.loads((tmp_path / "f.csv.manifest.json").read_text())
        assert meta["command"] == "frontier" and meta["tool_version"]

    def test_json(self, capsys):
        _, out, _ = run(capsys, "frontier", "--mech", "bim", "--alpha", "1.0", "--format", "json")
        doc = json.loads(out)
        assert doc["rows"] == [{"mechanism": "bim", "param": 1.0, "consistency": 1.0, "robustness": None, "unbounded": True}]
        assert "manifest" in doc

    def test_usage_errors(self, capsys):
        assert run(capsys, "frontier", "--mech", "bim")[0] == 2
        assert run(capsys, "frontier", "--mech", "birm", "--alpha", "1.0")[0] == 2
        assert run(capsys, "frontier", "--mech", "nope", "--alpha", "1.5")[0] == 2
        assert run(capsys, "frontier", "--alpha", "1:x")[0] == 2

    def test_io_error(self, capsys, tmp_path):
        code, _, err = run(capsys, "frontier", "--alpha", "1.5", "-o", str(tmp_path / "missing" / "x.csv"))
        assert code == 3 and "I/O" in err


class TestCurve:
    def test_golden(self, capsys):
        _, out, _ = run(capsys, "curve", "--alpha", "1.618", "--eta", "0:0.118:0.059")
        last = out.splitlines()[-1].split(",")
        assert last[0] == "0.118" and float(last[1]) == pytest.approx(1.618, abs=1e-9)

    def test_endpoints(self, capsys):
        _, out, _ = run(capsys, "curve", "--alpha", "1.5", "--eta", "0")
        assert out.splitlines()[1] == "0,1.5"
        _, out, _ = run(capsys, "curve", "--alpha", "1.5", "--eta", "10")
        assert out.splitlines()[1] == "10,3"

    def test_empirical_column(self, capsys):
        _, out, _ = run(capsys, "curve", "--alpha", "1.5", "--eta", "0:0.2:0.2", "--empirical")
        rows = [r.split(",") for r in out.splitlines()]
        assert rows[0] == ["eta", "closed_form", "empirical"]
        for eta, closed, emp in rows[1:]:
            assert float(emp) == pytest.approx(float(closed), abs=5e-3)

    def test_bad_alpha(self, capsys):
        assert run(capsys, "curve", "--alpha", "2.5")[0] == 2
        assert run(capsys, "curve", "--alpha", "1.5", "--eta", "-1")[0] == 2


class TestOptimizeLrm:
    def test_default(self, capsys):
        code, out, err = run(capsys, "optimize-lrm")
        doc = json.loads(out)
        assert code == 0 and err == "" and doc["warning"] is None
        assert doc["alpha_star"] == pytest.approx(0.118034, abs=1e-3)
        assert doc["p_star"] == pytest.approx(0.4, abs=1e-3)
        assert doc["ratio"] == pytest.approx(1.894427, abs=1e-4)
        assert doc["trace"]

    def test_restricted(self, capsys):
        doc = json.loads(run(capsys, "optimize-lrm", "--alpha-bounds", "0.16666666666666666:0.25")[1])
        assert (doc["alpha_star"], doc["p_star"], doc["ratio"]) == pytest.approx((1 / 6, 4 / 11, 21 / 11), abs=1e-4)

    def test_high_alpha_warns(self, capsys):
        code, out, err = run(capsys, "optimize-lrm", "--alpha-bounds", "0.3:0.4")
        doc = json.loads(out)
        assert code == 0 and doc["ratio"] >= 2.0 and doc["warning"] and "warning" in err

    def test_bad_bounds(self, capsys):
        assert run(capsys, "optimize-lrm", "--alpha-bounds", "0:0.9")[0] == 2
        assert run(capsys, "optimize-lrm", "--p-bounds", "x")[0] == 2


class TestVerify:
    def test_lowerbound(self, capsys):
        code, out, _ = run(capsys, "verify", "--suite", "lowerbound")
        doc = json.loads(out)
        rep = doc["reports"][0]
        assert code == 0 and doc["pass"] and rep["pass"]
        assert rep["delta"] == pytest.approx(617 / 4300, abs=1e-9) and rep["bound"] == pytest.approx(1.12579, abs=1e-5)

    def test_sp(self, capsys):
        code, out, _ = run(capsys, "verify", "--suite", "sp", "--seed", "7")
        doc = json.loads(out)
        assert code == 0
        blind = [r for r in doc["reports"] if r["check"] == "strategyproofness"]
        assert len(blind) == 6 and all(r["pass"] and r["counterexample"] is None for r in blind)
        controls = [r for r in doc["reports"] if r["check"].endswith("negative-control")]
        assert controls and all(r["counterexample"] for r in controls)

    def test_guarantees_schema(self, capsys):
        code, out, _ = run(capsys, "verify", "--suite", "guarantees")
        doc = json.loads(out)
        assert code == 0 and doc["suite"] == "guarantees"
        rep = doc["reports"][0]
        assert {"mechanism", "empirical", "closed_form", "witnesses", "pass"} <= set(rep)
        assert set(rep["empirical"]) >= {"consistency", "robustness"}
        assert doc["manifest"]["seed"] == 0

    def test_zero_tolerance_fails(self, capsys):
        assert run(capsys, "verify", "--suite", "guarantees", "--tolerance", "0")[0] == 1

    def test_bad_suite(self, capsys):
        assert run(capsys, "verify", "--suite", "bogus")[0] == 2
        assert run(capsys, "verify", "--trials", "0")[0] == 2

    def test_other_suites(self, capsys):
        for suite in ("reduction", "dominance"):
            code, out, _ = run(capsys, "verify", "--suite", suite, "--trials", "200")
            assert code == 0 and json.loads(out)["pass"]
