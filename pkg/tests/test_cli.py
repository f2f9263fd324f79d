"""
Tests for the amdiqkd command-line interface.
"""

import math
from pathlib import Path

import pytest
from pytest_mock import MockerFixture

from src.cli import build_parser, main
from src.core import telemetry
from src.core.constants import EXIT_CONFIG_ERROR, EXIT_IO_ERROR, EXIT_OK, EXIT_VERIFICATION_FAILED
from src.sweep.verify import PointReport, ProbabilityCheck, VerificationReport

PERFECT_FLAGS = ["--source", "0,1", "--qnd-source", "0,1", "--eta-det", "1", "--tau", "0"]

# =============================================================================
# Test Fixtures
# =============================================================================


@pytest.fixture
def perfect_config(tmp_path: Path) -> Path:
    """Config document for perfect sources at 44 km."""
    path = tmp_path / "perfect.conf"
    path.write_text("L = 44\nsource = 0, 1\nqnd_source = 0, 1\neta_det = 1\ntau_ns = 0\n")
    return path


def _printed(output: str) -> dict[str, str]:
    pairs = (line.split(" = ", 1) for line in output.splitlines() if " = " in line)
    return {key: value for key, value in pairs}


def _failed_report() -> VerificationReport:
    check = ProbabilityCheck(
        point=0,
        kind="oracle",
        name="p_c_z",
        value=1.0,
        reference=2.0,
        abs_dev=1.0,
        rel_dev=0.5,
        passed=False,
    )
    return VerificationReport(
        seed=1,
        abs_tol=1e-9,
        rel_tol=1e-6,
        unit_tol=1e-12,
        points=[PointReport(index=0, kind="oracle", parameters={}, checks=[check])],
    )


# =============================================================================
# Commands
# =============================================================================


class TestRateCommand:
    """Tests for amdiqkd rate."""

    def test_flags(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Perfect sources give eta_ch / 4."""
        code = main(["rate", "--L", "44", *PERFECT_FLAGS])
        printed = _printed(capsys.readouterr().out)

        assert code == EXIT_OK
        assert float(printed["eta_ch"]) == pytest.approx(math.exp(-1))
        assert float(printed["rate"]) == pytest.approx(math.exp(-1) / 4)
        assert printed["beats_bound"] == "False"

    def test_config_file(self, perfect_config: Path, capsys: pytest.CaptureFixture[str]) -> None:
        """Values come from the document."""
        assert main(["rate", "--config", str(perfect_config)]) == EXIT_OK
        assert float(_printed(capsys.readouterr().out)["L_km"]) == 44.0

    def test_flag_overrides_config(
        self, perfect_config: Path, capsys: pytest.CaptureFixture[str]
    ) -> None:
        """A flag wins over the document."""
        assert main(["rate", "--config", str(perfect_config), "--L", "88"]) == EXIT_OK
        assert float(_printed(capsys.readouterr().out)["eta_ch"]) == pytest.approx(math.exp(-2))


class TestOtherCommands:
    """Tests for check-pdc, config, sweep and verify."""

    def test_check_pdc(self, capsys: pytest.CaptureFixture[str]) -> None:
        """The PDC condition is reported as unsatisfiable."""
        code = main(["check-pdc", "--lambda", "0.5", "--mu", "0.01"])
        printed = _printed(capsys.readouterr().out)

        assert code == EXIT_OK
        assert float(printed["lhs"]) == pytest.approx(0.5 / (1.5**3 * 1.01**2))
        assert float(printed["rhs"]) == pytest.approx(1.44)
        assert printed["satisfiable"] == "False"

    def test_config_defaults(self, capsys: pytest.CaptureFixture[str]) -> None:
        """With no document or flags the defaults are printed."""
        code = main(["config"])
        printed = _printed(capsys.readouterr().out)

        assert code == EXIT_OK
        assert "eta_det" in printed

    def test_config_prints_effective_values(self, capsys: pytest.CaptureFixture[str]) -> None:
        """The merged configuration is printed as a document."""
        code = main(["config", "--mode", "sweep", "--eta-det", "0.8", "--q0", "0.2"])
        printed = _printed(capsys.readouterr().out)

        assert code == EXIT_OK
        assert printed["mode"] == "sweep"
        assert printed["eta_det"] == "0.8"
        assert printed["q0"] == "0.2"

    def test_sweep_to_stdout(self, capsys: pytest.CaptureFixture[str]) -> None:
        """CSV rows go to stdout without --out."""
        code = main(["sweep", *PERFECT_FLAGS, "--L-points", "3"])
        lines = capsys.readouterr().out.splitlines()

        assert code == EXIT_OK
        assert lines[0].startswith("L_km,eta_ch,p_qnd")
        assert len(lines) == 4

    def test_log_level_keeps_stdout_clean(
        self, mocker: MockerFixture, capsys: pytest.CaptureFixture[str]
    ) -> None:
        """--log-level alone configures logging, which stays on stderr."""
        spy = mocker.spy(telemetry, "setup_logging")

        code = main(["--log-level", "DEBUG", "sweep", *PERFECT_FLAGS, "--L-points", "2"])
        captured = capsys.readouterr()

        assert code == EXIT_OK
        spy.assert_called_once_with(level="DEBUG", fmt=None)
        assert captured.out.startswith("L_km,eta_ch,p_qnd")
        assert "sweep complete" in captured.err

    def test_sweep_json(self, tmp_path: Path) -> None:
        """--json-out writes the rows as JSON as well."""
        out = tmp_path / "rates.csv"
        json_out = tmp_path / "rates.json"

        code = main(
            ["sweep", *PERFECT_FLAGS, "--L-points", "2", "--out", str(out), "--json-out", str(json_out)]
        )

        assert code == EXIT_OK
        assert out.exists()
        assert json_out.read_text().lstrip().startswith("[")

    def test_verify_failure_exit_code(
        self, mocker: MockerFixture, capsys: pytest.CaptureFixture[str]
    ) -> None:
        """A failing report exits with the verification code and lists the failure."""
        mocker.patch("src.cli.run_verify", return_value=_failed_report())

        code = main(["verify", "--points", "1"])
        output = capsys.readouterr().out

        assert code == EXIT_VERIFICATION_FAILED
        assert "failures = 1" in output
        assert "FAIL point 0 [oracle] p_c_z" in output


# =============================================================================
# Exit Codes
# =============================================================================


class TestExitCodes:
    """Tests for error handling in main."""

    @pytest.mark.parametrize(
        "argv",
        [
            [],
            ["rate", "--bogus"],
            ["rate", "--eta-det", "2"],
            ["rate", "--source", "0.5,0.7"],
            ["rate", "--config", "/nonexistent/amdiqkd.conf"],
        ],
    )
    def test_configuration_errors(self, argv: list[str]) -> None:
        """Usage and configuration errors exit with 1."""
        assert main(argv) == EXIT_CONFIG_ERROR

    def test_help(self) -> None:
        """--help exits cleanly."""
        assert main(["--help"]) == EXIT_OK

    def test_unwritable_output(self, tmp_path: Path) -> None:
        """Output failures exit with 3."""
        target = tmp_path / "missing" / "rates.csv"

        assert main(["sweep", *PERFECT_FLAGS, "--L-points", "2", "--out", str(target)]) == EXIT_IO_ERROR

    def test_parser_subcommands(self) -> None:
        """Every mode has a subcommand."""
        parser = build_parser()

        for command in ("rate", "sweep", "qmax", "verify", "config"):
            assert parser.parse_args([command]).command == command
        assert parser.parse_args(["check-pdc", "--lambda", "1", "--mu", "1"]).command == "check-pdc"
