"""Command-line interface: exit codes, artifact formats, reproducibility."""

import json

import pytest

from bzcap.cli import main


def run(tmp_path, *argv):
    out = tmp_path / "out.json"
    code = main([*argv, "--out", str(out)])
    payload = json.loads(out.read_text()) if out.exists() else None
    return code, payload


class TestOptimize:
    def test_case1_pins_mu2(self, tmp_path):
        code, payload = run(tmp_path, "optimize", "--lam", "0.0")
        assert code == 0
        assert payload["case"] == 1
        assert payload["mu2"] == 1.0
        assert payload["R1_bits"] == pytest.approx(0.685417751634, abs=1e-9)
        assert payload["R2_bits"] == 0.0

    def test_case2_pins_mu1(self, tmp_path):
        code, payload = run(tmp_path, "optimize", "--lam", "10.0")
        assert code == 0
        assert payload["case"] == 2
        assert payload["mu1"] == 1.0
        assert payload["R2_bits"] == pytest.approx(0.245986254667, abs=1e-9)

    def test_case3_interior(self, tmp_path):
        code, payload = run(tmp_path, "optimize", "--lam", "3.0")
        assert code == 0
        assert payload["case"] == 3
        assert abs(payload["pairing_residual"]) <= 1e-9
        assert 0 < payload["mu1"] < 1
        assert 0 < payload["mu2"] < 1

    def test_nats_switches_units(self, tmp_path):
        code, payload = run(tmp_path, "optimize", "--lam", "0.0", "--nats")
        assert code == 0
        assert "R1_nats" in payload and "R1_bits" not in payload
        assert payload["R1_nats"] == pytest.approx(0.475095382051, abs=1e-9)

    def test_rejects_negative_lambda(self, tmp_path):
        assert run(tmp_path, "optimize", "--lam", "-1.0")[0] == 2

    def test_payload_has_run_config(self, tmp_path):
        _, payload = run(tmp_path, "optimize", "--lam", "1.0")
        assert payload["run_config"]["alpha1"] == 0.15
        assert "version" in payload


class TestBoundary:
    def test_golden_header_and_row_count(self, tmp_path):
        out = tmp_path / "region.csv"
        assert main(["boundary", "--points", "2", "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0].startswith("# ")
        assert lines[1] == "mu1,mu2,lambda,R1_bits,R2_bits"
        assert len(lines) == 2 + 2

    def test_nats_header(self, tmp_path):
        out = tmp_path / "region.csv"
        assert main(["boundary", "--points", "2", "--nats", "--out", str(out)]) == 0
        assert out.read_text().splitlines()[1] == "mu1,mu2,lambda,R1_nats,R2_nats"

    def test_endpoint_rows(self, tmp_path):
        out = tmp_path / "region.csv"
        assert main(["boundary", "--points", "50", "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        first = [float(v) for v in lines[2].split(",")]
        last = [float(v) for v in lines[-1].split(",")]
        assert first[4] == 0.0  # R2 = 0 where user 2 is silent
        assert last[3] == 0.0  # R1 = 0 at the other end
        assert first[3] == pytest.approx(0.685417751634, abs=1e-9)
        assert last[4] == pytest.approx(0.245986254667, abs=1e-9)

    def test_rejects_misordered_arms(self, tmp_path):
        out = tmp_path / "region.csv"
        code = main(
            ["boundary", "--alpha1", "0.6", "--alpha2", "0.15", "--points", "2", "--out", str(out)]
        )
        assert code == 2


class TestVerifyCommand:
    def test_gfunction_suite_passes(self, tmp_path):
        code, payload = run(tmp_path, "verify", "gfunction", "--grid-step", "0.2")
        assert code == 0
        assert payload["passed"] is True

    def test_derivatives_suite_small(self, tmp_path):
        code, payload = run(
            tmp_path, "verify", "derivatives", "--samples", "20", "--channels", "3"
        )
        assert code == 0
        assert payload["passed"] is True


class TestSimulate:
    def test_reruns_are_byte_identical(self, tmp_path):
        args = ["simulate", "--mu1", "0.8", "--mu2", "0.5", "--samples", "20000", "--seed", "4"]
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        assert main([*args, "--out", str(a)]) == 0
        assert main([*args, "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_agreement_with_closed_form(self, tmp_path):
        code, payload = run(
            tmp_path, "simulate", "--mu1", "0.8", "--mu2", "0.5", "--samples", "100000"
        )
        assert code == 0
        assert abs(payload["z_scores"]["z1"]) < 4
        assert abs(payload["z_scores"]["z2"]) < 4
        assert payload["empirical"]["R1_bits"] > 0

    def test_nats_keys(self, tmp_path):
        _, payload = run(
            tmp_path, "simulate", "--mu1", "0.8", "--mu2", "0.5", "--samples", "20000", "--nats"
        )
        assert "R1_nats" in payload["empirical"]
        assert "R1_bits" not in payload["empirical"]

    def test_rejects_tiny_sample_count(self, tmp_path):
        assert run(tmp_path, "simulate", "--mu1", "0.8", "--mu2", "0.5", "--samples", "100")[0] == 2


class TestCodec:
    def test_tiny_run_reports_all_fields(self, tmp_path):
        code, payload = run(
            tmp_path,
            "codec",
            "--k",
            "64",
            "--frames",
            "2",
            "--iters",
            "2",
            "--noiseless",
            "--seed",
            "9",
        )
        assert code == 0
        for field in (
            "info_bits",
            "bit_errors_user1",
            "bit_errors_user2",
            "frame_errors_user1",
            "frame_errors_user2",
            "measured_ones_density_1",
            "measured_ones_density_2",
            "seed",
            "frames",
            "rx1_user2_bit_errors",
        ):
            assert field in payload
        assert payload["info_bits"] == 2 * 2 * 64

    def test_reruns_are_byte_identical(self, tmp_path):
        args = ["codec", "--k", "64", "--frames", "2", "--iters", "2", "--seed", "9"]
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        assert main([*args, "--out", str(a)]) == 0
        assert main([*args, "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_rejects_zero_frames(self, tmp_path):
        assert run(tmp_path, "codec", "--k", "64", "--frames", "0")[0] == 2

    def test_rejects_missing_label_file(self, tmp_path):
        code = run(tmp_path, "codec", "--k", "64", "--frames", "1", "--labels1", "/nonexistent")[0]
        assert code == 2


class TestTopLevel:
    def test_no_command_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 2

    def test_verify_failure_exits_one(self, tmp_path):
        # an absurdly tight tolerance forces a failing report
        code, payload = run(
            tmp_path, "verify", "degradation", "--samples", "20000", "--tol", "1e-9"
        )
        assert code == 1
        assert payload["passed"] is False
