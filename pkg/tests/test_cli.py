import json
from pathlib import Path

import pytest

from symheat.cli import main

JOBS = Path(__file__).resolve().parent.parent / "jobs"


def write_job(tmp_path, payload, name="job.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


def scalar_entries(report):
    return [entry["matrix"][0][0] for entry in report["a"]]


class TestCompute:
    def test_s2_scalar(self, tmp_path, capsys):
        rc = main(["compute", str(JOBS / "s2_scalar.json")])
        assert rc == 0
        report = json.loads(capsys.readouterr().out)
        assert scalar_entries(report) == ["1/1", "1/3", "1/15", "4/315"]

    def test_flat_zeros(self, capsys):
        rc = main(["compute", str(JOBS / "flat3.json"), "-k", "5"])
        assert rc == 0
        report = json.loads(capsys.readouterr().out)
        assert scalar_entries(report) == ["1/1"] + ["0/1"] * 5

    def test_malformed_json(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{broken", encoding="utf-8")
        rc = main(["compute", str(path)])
        assert rc == 2
        err = capsys.readouterr().err
        assert "line 1" in err and "column" in err

    def test_missing_file(self, capsys):
        assert main(["compute", "/nonexistent/job.json"]) == 2

    def test_kmax_overflow_exit_code(self, capsys):
        rc = main(["compute", str(JOBS / "s2_scalar.json"), "-k", "9"])
        assert rc == 4

    def test_trace_output(self, capsys):
        rc = main(["compute", str(JOBS / "s2_scalar.json"), "--trace"])
        assert rc == 0
        report = json.loads(capsys.readouterr().out)
        assert report["trace"][1]["coeff"] == "4/3"
        assert report["trace"][1]["pi_power"] == 1

    def test_trace_needs_volume(self, capsys):
        rc = main(["compute", str(JOBS / "flat2_twist.json"), "--trace"])
        assert rc == 2

    def test_text_format(self, capsys):
        rc = main(["compute", str(JOBS / "s2_scalar.json"), "--format", "text"])
        assert rc == 0
        out = capsys.readouterr().out
        assert "a_1 = 1/3 (~0.333333)" in out

    def test_decimal_output_mode(self, capsys):
        rc = main(["compute", str(JOBS / "s2_scalar.json"), "--output", "both"])
        assert rc == 0
        report = json.loads(capsys.readouterr().out)
        assert report["a"][1]["matrix_decimal"][0][0] == pytest.approx(1 / 3)

    def test_twist_job(self, capsys):
        rc = main(["compute", str(JOBS / "flat2_twist.json")])
        assert rc == 0
        report = json.loads(capsys.readouterr().out)
        assert scalar_entries(report) == ["1/1", "0/1", "-1/6", "0/1", "7/360"]


class TestValidate:
    def test_catalog_s3_spinor_passes(self, capsys):
        rc = main(["validate", str(JOBS / "s3_spinor.json")])
        out = capsys.readouterr().out
        assert rc == 0
        assert "FAIL" not in out
        assert "fiber-so-n-relations: pass" in out

    def test_bad_beta_named_in_output(self, tmp_path, capsys):
        # beta not proportional to the invariant form: the model builds but
        # the invariance check must fail and be named
        eye3 = [["1/1" if i == j else "0/1" for j in range(3)] for i in range(3)]
        e12 = [["0/1", "1/1", "0/1"], ["-1/1", "0/1", "0/1"], ["0/1", "0/1", "0/1"]]
        e13 = [["0/1", "0/1", "1/1"], ["0/1", "0/1", "0/1"], ["-1/1", "0/1", "0/1"]]
        e23 = [["0/1", "0/1", "0/1"], ["0/1", "0/1", "1/1"], ["0/1", "-1/1", "0/1"]]
        beta = [["1/1", "0/1", "0/1"], ["0/1", "1/1", "0/1"], ["0/1", "0/1", "2/1"]]
        job = {
            "space": {"explicit": {"n": 3, "p": 3, "flat_dim": 0,
                                   "E": [e12, e13, e23], "beta": beta}},
            "bundle": {"catalog": "scalar"},
        }
        rc = main(["validate", write_job(tmp_path, job)])
        out = capsys.readouterr().out
        assert rc == 3
        assert "beta-f-invariance: FAIL" in out

    def test_dependent_generators_reported(self, tmp_path, capsys):
        e12 = [["0/1", "1/1", "0/1"], ["-1/1", "0/1", "0/1"], ["0/1", "0/1", "0/1"]]
        job = {
            "space": {"explicit": {"n": 3, "p": 2, "flat_dim": 0,
                                   "E": [e12, e12],
                                   "beta": [["1/1", "0/1"], ["0/1", "1/1"]]}},
            "bundle": {"catalog": "scalar"},
        }
        rc = main(["validate", write_job(tmp_path, job)])
        err = capsys.readouterr().err
        assert rc == 3
        assert "dependent" in err


class TestCheckGroup:
    def test_s2_passes(self, capsys):
        rc = main(["check-group", str(JOBS / "s2_scalar.json"), "--samples", "4"])
        assert rc == 0
        report = json.loads(capsys.readouterr().out)
        assert all(c["pass"] for c in report["checks"])
        names = [c["check"] for c in report["checks"]]
        assert names == ["laplace-identity", "heat-equation"]

    def test_flat_twist_passes(self, capsys):
        rc = main(["check-group", str(JOBS / "flat2_twist.json"), "--samples", "4"])
        assert rc == 0
        report = json.loads(capsys.readouterr().out)
        assert all(c["pass"] for c in report["checks"])

    def test_large_group_refused(self, tmp_path, capsys):
        job = {
            "space": {"catalog": "sphere", "params": {"n": 4, "radius": "1"}},
            "bundle": {"catalog": "scalar"},
        }
        rc = main(["check-group", write_job(tmp_path, job)])
        err = capsys.readouterr().err
        assert rc == 2
        assert "N <= 6" in err

    def test_tolerance_override(self, capsys):
        rc = main(["check-group", str(JOBS / "s2_scalar.json"), "--samples", "2",
                   "--tolerance", "1e-15"])
        assert rc == 3  # impossible tolerance: checks must report failure


class TestOracle:
    def test_sphere_json(self, capsys):
        rc = main(["oracle", "sphere", "--n", "2", "--kmax", "3"])
        assert rc == 0
        report = json.loads(capsys.readouterr().out)
        assert report["n"] == 2
        assert len(report["approx_a"]) == 4
        assert len(report["error_estimates"]) == 4
        assert report["approx_a"][1] == pytest.approx(1 / 3, abs=1e-8)

    def test_bad_kmax(self, capsys):
        assert main(["oracle", "sphere", "--n", "2", "--kmax", "9"]) == 2


class TestDeterminism:
    @pytest.mark.parametrize("job", [
        "s2_scalar.json", "s3_scalar.json", "flat2_x_s2_spinor_twist.json",
    ])
    def test_byte_identical_across_runs_and_threads(self, tmp_path, job):
        outputs = []
        for i, threads in enumerate(["1", "4", "1"]):
            path = tmp_path / f"out{i}.json"
            args = ["compute", str(JOBS / job), "--threads", threads,
                    "--output", "both", "-o", str(path)]
            if job == "s2_scalar.json":
                args.append("--trace")
            assert main(args) == 0
            outputs.append(path.read_bytes())
        assert outputs[0] == outputs[1] == outputs[2]
