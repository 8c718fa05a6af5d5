import json
import math

import pytest

from critex.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestExponentsCommand:
    def test_derived_only(self, capsys):
        code, out, _ = run_cli(capsys, "exponents", "--n", "2", "--gamma", "0.5")
        assert code == 0
        payload = json.loads(out)
        assert payload["derived"]["p_crit"] == pytest.approx(1 + 4 / 3)
        assert payload["derived"]["p_fujita"] == 2.0
        assert "verdict" not in payload

    def test_with_verdict(self, capsys):
        code, out, _ = run_cli(capsys, "exponents", "--n", "1", "--gamma", "0.3",
                               "--p", "5", "--s", "1")
        payload = json.loads(out)
        assert payload["verdict"]["regime"] == "GlobalExistence"
        assert all({"name", "passed", "lhs", "rhs"} <= set(r)
                   for r in payload["verdict"]["reasons"])

    def test_subcritical_includes_lifespan_exponent(self, capsys):
        _, out, _ = run_cli(capsys, "exponents", "--n", "1", "--gamma", "0.4",
                            "--p", "2")
        payload = json.loads(out)
        assert payload["verdict"]["regime"] == "BlowUp"
        assert payload["derived"]["lifespan_exponent"] == pytest.approx(-2 / 1.1)
        assert payload["sharp_lifespan_admissible"]

    def test_boundary_gamma_still_reports_lifespan(self, capsys):
        # gamma = n/2: classification is out of scope but the lifespan
        # arithmetic applies formally
        code, out, _ = run_cli(capsys, "exponents", "--n", "1", "--gamma",
                               "0.5", "--p", "2")
        assert code == 0
        payload = json.loads(out)
        assert "verdict" not in payload
        assert "verdict_error" in payload
        assert payload["derived"]["lifespan_exponent"] == pytest.approx(-2.0)
        assert payload["derived"]["alpha0"] == pytest.approx(0.5)
        assert payload["sharp_lifespan_admissible"]

    def test_missing_flags(self, capsys):
        code, _, err = run_cli(capsys, "exponents", "--n", "2")
        assert code == 2
        assert "--gamma" in err


class TestProbeCommand:
    def test_single_row(self, capsys):
        code, out, _ = run_cli(capsys, "probe", "--t", "1.0", "--r", "0.0")
        lines = out.strip().splitlines()
        assert lines[0] == "t,r,k00,k01,k10,k11"
        values = [float(v) for v in lines[1].split(",")]
        assert values[2] == 1.0
        assert values[3] == pytest.approx(1 - math.exp(-1), rel=1e-14)

    def test_lists(self, capsys):
        _, out, _ = run_cli(capsys, "probe", "--t", "0.5,1.0", "--r", "0.0,0.5,1.0")
        assert len(out.strip().splitlines()) == 1 + 6


class TestRunCommands:
    def test_phase_diagram(self, capsys, tmp_path):
        code, out, _ = run_cli(capsys, "phase-diagram", "--n", "1", "--s", "1",
                               "--gamma-min", "0.1", "--gamma-max", "0.4",
                               "--gamma-steps", "3", "--p-min", "1.5",
                               "--p-max", "4.5", "--p-steps", "4",
                               "--out", str(tmp_path))
        assert code == 0
        payload = json.loads(out)
        assert payload["cells"] == 12
        run_dir = tmp_path / payload["run_dir"].split("/")[-1]
        assert (run_dir / "regions.csv").exists()

    def test_linear_decay(self, capsys, tmp_path):
        code, out, _ = run_cli(capsys, "linear-decay", "--n", "2", "--gamma",
                               "0.7", "--s", "1", "--profile", "powerlaw:a=0.25",
                               "--t0", "10", "--t1", "1e4", "--points", "48",
                               "--out", str(tmp_path))
        assert code == 0
        payload = json.loads(out)
        assert payload["fits"]["0.0"]["predicted_rate"] == pytest.approx(-0.35)
        assert payload["fits"]["0.0"]["slope"] == pytest.approx(-0.375, abs=0.03)

    def test_diffusion(self, capsys, tmp_path):
        code, out, _ = run_cli(capsys, "diffusion", "--n", "2", "--gamma", "0.7",
                               "--s", "0.5", "--profile", "powerlaw:a=0.25",
                               "--t0", "10", "--t1", "1e4", "--points", "48",
                               "--out", str(tmp_path))
        payload = json.loads(out)
        assert -1.3 <= payload["gain"] <= -0.85

    def test_evolve_and_testfn(self, capsys, tmp_path):
        code, out, _ = run_cli(capsys, "evolve", "--dim", "1", "--N", "512",
                               "--L", "157.0", "--p", "2", "--eps", "0.05",
                               "--gamma", "0.5", "--s", "1", "--dt", "0.05",
                               "--tend", "5.0", "--snapshots", "16",
                               "--out", str(tmp_path))
        assert code == 0
        evolve_payload = json.loads(out)
        assert evolve_payload["status"] == "Completed"
        run_dir = evolve_payload["run_dir"]

        code, out, _ = run_cli(capsys, "testfn", "--run", run_dir, "--R",
                               "1.0,2.0", "--out", str(tmp_path))
        assert code == 0
        payload = json.loads(out)
        assert len(payload["rows"]) == 2
        assert payload["exponent_gate"]["holds"]

    def test_lifespan(self, capsys, tmp_path):
        code, out, _ = run_cli(capsys, "lifespan", "--dim", "1", "--gamma",
                               "0.5", "--s", "1", "--p", "2", "--eps-start",
                               "4.0", "--eps-factor", "0.7197", "--count", "4",
                               "--N", "2048", "--L", "314.159", "--dt", "0.05",
                               "--tend", "200", "--out", str(tmp_path))
        assert code == 0
        payload = json.loads(out)
        assert payload["fitted_slope"] is not None
        assert len(payload["rows"]) == 4

    def test_config_file_with_flag_override(self, capsys, tmp_path):
        config = {"n": 1.0, "gamma": 0.2, "p": 2.0}
        path = tmp_path / "config.json"
        path.write_text(json.dumps(config))
        _, out, _ = run_cli(capsys, "exponents", "--config", str(path),
                            "--gamma", "0.3")
        payload = json.loads(out)
        assert payload["params"]["gamma"] == 0.3  # flag wins
        assert payload["params"]["n"] == 1.0      # from file
        assert payload["derived"]["p_crit"] == pytest.approx(1 + 4 / 1.6)

    def test_invalid_parameters_exit_code(self, capsys):
        code, _, err = run_cli(capsys, "exponents", "--n", "2", "--gamma", "-1")
        assert code == 2
        assert "error" in err
