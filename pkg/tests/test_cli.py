"""
Tests for the command-line interface.
"""

import json
from unittest.mock import patch

import pytest
from click.testing import CliRunner

from src.cli import cli
from src.selftest import CheckResult

QUIET = ["--log-level", "WARNING"]
SMALL = ["--paths", "1024", "--steps", "16"]


@pytest.fixture
def runner() -> CliRunner:
    """Click test runner."""
    return CliRunner()


@pytest.fixture
def tiny_config(temp_dir):
    """Experiment file with one strike and three path counts."""
    path = temp_dir / "tiny.json"
    path.write_text(json.dumps({
        "strikes": [100.0],
        "fixings": 8,
        "quantities": ["price"],
        "methods": ["mc+incremental", "qmc+bridge"],
        "path_grid": [64, 128, 256],
        "runs": 2,
        "reference_paths": 512,
    }))
    return path


def _data_lines(output: str) -> list[str]:
    return [line for line in output.splitlines() if line and line[0].isdigit()]


class TestCliBasics:
    """Tests for the command group."""

    def test_help_lists_commands(self, runner):
        """Test that --help names every command."""
        result = runner.invoke(cli, ["--help"])
        assert result.exit_code == 0
        for command in ("price", "greeks", "smile", "converge", "selftest", "config"):
            assert command in result.output

    def test_version(self, runner):
        """Test the version option."""
        result = runner.invoke(cli, ["--version"])
        assert result.exit_code == 0
        assert "0.1.0" in result.output

    def test_config_command(self, runner):
        """Test that the settings table is shown."""
        result = runner.invoke(cli, [*QUIET, "config"])
        assert result.exit_code == 0
        assert "Chunk size" in result.output

    def test_unknown_command(self, runner):
        """Test that a usage error exits with 1."""
        result = runner.invoke(cli, ["frobnicate"])
        assert result.exit_code == 1


class TestPriceCommand:
    """Tests for hlv-qmc price."""

    def test_qmc_price(self, runner):
        """Test a small QMC run prints a value and no standard error."""
        result = runner.invoke(cli, [*QUIET, "price", *SMALL])
        assert result.exit_code == 0
        assert result.output.startswith("value")
        assert "std_error" not in result.output
        assert "paths      1024" in result.output

    def test_output_is_reproducible(self, runner):
        """Test that repeated runs print identical results."""
        first = runner.invoke(cli, [*QUIET, "price", *SMALL, "--strike", "90"])
        second = runner.invoke(cli, [*QUIET, "--threads", "1", "price", *SMALL, "--strike", "90"])
        assert first.exit_code == 0 and second.exit_code == 0
        assert first.output == second.output

    def test_mt_price_has_standard_error(self, runner):
        """Test that Mersenne Twister runs report a standard error."""
        result = runner.invoke(cli, [*QUIET, "price", *SMALL, "--sequence", "mt", "--seed", "3"])
        assert result.exit_code == 0
        assert "std_error" in result.output

    def test_beta_out_of_range(self, runner):
        """Test that beta = 1.5 is a usage error."""
        result = runner.invoke(cli, [*QUIET, "price", *SMALL, "--beta", "1.5"])
        assert result.exit_code == 1

    def test_non_positive_spot(self, runner):
        """Test that spot 0 is a usage error."""
        result = runner.invoke(cli, [*QUIET, "price", *SMALL, "--spot", "0"])
        assert result.exit_code == 1

    def test_missing_direction_numbers(self, runner, temp_dir):
        """Test that an unreadable direction-number file exits with 3."""
        result = runner.invoke(cli, [*QUIET, "price", *SMALL, "--dirnums", str(temp_dir / "missing.txt")])
        assert result.exit_code == 3

    def test_missing_direction_numbers_from_environment(self, runner, temp_dir, monkeypatch, clear_settings):
        """Test that HLVQMC_DIRECTION_NUMBERS is honored."""
        monkeypatch.setenv("HLVQMC_DIRECTION_NUMBERS", str(temp_dir / "missing.txt"))
        result = runner.invoke(cli, [*QUIET, "price", *SMALL])
        assert result.exit_code == 3

    def test_malformed_direction_numbers(self, runner, temp_dir):
        """Test that a parse error exits with 2."""
        path = temp_dir / "bad.txt"
        path.write_text("2 1 0 1\n3 2 1 1 4\n")
        result = runner.invoke(cli, [*QUIET, "price", "--paths", "16", "--steps", "2", "--dirnums", str(path)])
        assert result.exit_code == 2

    def test_capacity_exceeded(self, runner, temp_dir):
        """Test that too few table rows for the step count exits with 2."""
        path = temp_dir / "short.txt"
        path.write_text("2 1 0 1\n")
        result = runner.invoke(cli, [*QUIET, "price", "--paths", "16", "--steps", "4", "--dirnums", str(path)])
        assert result.exit_code == 2


class TestGreeksCommand:
    """Tests for hlv-qmc greeks."""

    def test_prints_all_greeks(self, runner):
        """Test that every Greek is printed."""
        result = runner.invoke(cli, [*QUIET, "greeks", "--paths", "512", "--steps", "8"])
        assert result.exit_code == 0
        for name in ("price", "delta", "gamma", "vega_nu", "vega_beta"):
            assert name in result.output

    def test_without_recycling(self, runner):
        """Test the independent-blocks mode."""
        result = runner.invoke(cli, [*QUIET, "greeks", "--paths", "256", "--steps", "8", "--no-recycle"])
        assert result.exit_code == 0

    def test_beta_one_cannot_be_bumped(self, runner):
        """Test that beta = 1 exits with 2."""
        result = runner.invoke(cli, [*QUIET, "greeks", "--paths", "512", "--steps", "8", "--beta", "1"])
        assert result.exit_code == 2


class TestSmileCommand:
    """Tests for hlv-qmc smile."""

    def test_empty_strikes(self, runner):
        """Test that no strikes prints only the header."""
        result = runner.invoke(cli, [*QUIET, "smile", "--strikes", ""])
        assert result.exit_code == 0
        assert "strike,implied_vol" in result.output
        assert _data_lines(result.output) == []

    def test_flat_smile_at_beta_one(self, runner):
        """Test one CSV row per strike with volatility near nu."""
        result = runner.invoke(
            cli, [*QUIET, "smile", "--beta", "1", "--paths", "4096", "--steps", "8", "--strikes", "90,100,110"]
        )
        assert result.exit_code == 0
        rows = _data_lines(result.output)
        assert [row.split(",")[0] for row in rows] == ["90", "100", "110"]
        for row in rows:
            assert float(row.split(",")[1]) == pytest.approx(0.3, abs=0.01)

    def test_strikes_printed_exactly(self, runner):
        """Test that a strike with eight significant digits is echoed unchanged."""
        result = runner.invoke(
            cli, [*QUIET, "smile", "--paths", "4096", "--steps", "8", "--strikes", "100,1234567.5"]
        )
        assert result.exit_code == 0
        assert [row.split(",")[0] for row in _data_lines(result.output)] == ["100", "1234567.5"]

    def test_too_few_paths(self, runner):
        """Test that N < 4096 exits with 2."""
        result = runner.invoke(cli, [*QUIET, "smile", "--paths", "1024", "--steps", "8", "--strikes", "100"])
        assert result.exit_code == 2

    def test_bad_strike_list(self, runner):
        """Test that a non-numeric strike is a usage error."""
        result = runner.invoke(cli, [*QUIET, "smile", "--strikes", "90,abc"])
        assert result.exit_code == 1


class TestConvergeCommand:
    """Tests for hlv-qmc converge."""

    def test_print_schema(self, runner):
        """Test that the schema is valid JSON describing the experiment fields."""
        result = runner.invoke(cli, [*QUIET, "converge", "--print-schema"])
        assert result.exit_code == 0
        schema = json.loads(result.output)
        assert "path_grid" in schema["properties"]

    def test_writes_report(self, runner, tiny_config, temp_dir):
        """Test that a tiny study writes its CSVs and prints the rates."""
        out = temp_dir / "out"
        result = runner.invoke(cli, [*QUIET, "converge", "--config", str(tiny_config), "--out", str(out)])
        assert result.exit_code == 0
        assert (out / "price_K100.csv").exists()
        assert (out / "summary.csv").exists()
        assert (out / "config.json").exists()
        assert "qmc+bridge" in result.output

    def test_report_is_reproducible(self, runner, tiny_config, temp_dir):
        """Test byte-identical CSVs across runs and thread counts."""
        first, second = temp_dir / "a", temp_dir / "b"
        runner.invoke(cli, [*QUIET, "converge", "--config", str(tiny_config), "--out", str(first)])
        runner.invoke(cli, [*QUIET, "--threads", "2", "converge", "--config", str(tiny_config), "--out", str(second)])
        for name in ("summary.csv", "price_K100.csv"):
            assert (first / name).read_bytes() == (second / name).read_bytes()

    def test_overrides(self, runner, tiny_config, temp_dir):
        """Test that command-line overrides reach config.json."""
        out = temp_dir / "out"
        result = runner.invoke(cli, [
            *QUIET, "converge", "--config", str(tiny_config), "--out", str(out),
            "--runs", "3", "--grid", "32,64,128", "--strikes", "95,105",
        ])
        assert result.exit_code == 0
        written = json.loads((out / "config.json").read_text())
        assert written["runs"] == 3
        assert written["path_grid"] == [32, 64, 128]
        assert written["strikes"] == [95.0, 105.0]

    def test_default_output_directory(self, runner, tiny_config, temp_dir, monkeypatch, clear_settings):
        """Test that without --out the report goes to HLVQMC_DEFAULT_OUTPUT_DIR, created if missing."""
        target = temp_dir / "reports" / "study"
        monkeypatch.setenv("HLVQMC_DEFAULT_OUTPUT_DIR", str(target))
        result = runner.invoke(cli, [*QUIET, "converge", "--config", str(tiny_config)])
        assert result.exit_code == 0
        assert (target / "summary.csv").exists()

    def test_missing_config(self, runner, temp_dir):
        """Test that a missing experiment file exits with 3."""
        result = runner.invoke(cli, [*QUIET, "converge", "--config", str(temp_dir / "none.json")])
        assert result.exit_code == 3

    def test_invalid_config(self, runner, temp_dir):
        """Test that a config with a single run exits with 1."""
        path = temp_dir / "bad.json"
        path.write_text(json.dumps({"runs": 1}))
        result = runner.invoke(cli, [*QUIET, "converge", "--config", str(path), "--out", str(temp_dir)])
        assert result.exit_code == 1

    def test_malformed_json(self, runner, temp_dir):
        """Test that unparsable JSON exits with 1."""
        path = temp_dir / "bad.json"
        path.write_text("{not json")
        result = runner.invoke(cli, [*QUIET, "converge", "--config", str(path), "--out", str(temp_dir)])
        assert result.exit_code == 1


class TestSelftestCommand:
    """Tests for hlv-qmc selftest."""

    def test_all_checks_pass(self, runner):
        """Test the bundled direction numbers pass every check."""
        result = runner.invoke(cli, [*QUIET, "selftest"])
        assert result.exit_code == 0
        assert "pass" in result.output
        assert "FAIL" not in result.output

    def test_failure_exits_with_two(self, runner):
        """Test that a failing check sets exit code 2."""
        failing = [CheckResult(name="broken", passed=False, detail="forced")]
        with patch("src.selftest.run_checks", return_value=failing):
            result = runner.invoke(cli, [*QUIET, "selftest"])
        assert result.exit_code == 2
        assert "FAIL" in result.output
