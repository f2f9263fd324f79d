"""
Tests for key-value configuration documents.
"""

import pytest

from src.core.exceptions import ConflictingSourceSpec, ParseError
from src.models.sweep import ExplicitSourceSpec, PdcSourceSpec, RatioSourceSpec, SweepConfig
from src.sweep import emit_config, parse_config, parse_config_fields

QMAX_DOCUMENT = """\
# Q^max map over two P values
mode = qmax
eta_det = 0.9
tau_ns = 67      # feedforward
q0 = 0.2
p0_values = 0.1
P_values = 0.01, 0.25
L_points = 40
"""


class TestParseConfigFields:
    """Tests for splitting documents into raw fields."""

    def test_comments_and_blank_lines(self) -> None:
        """Comments and blank lines are skipped; line numbers are kept."""
        fields = parse_config_fields(QMAX_DOCUMENT)

        assert fields["mode"].value == "qmax"
        assert fields["tau_ns"].value == "67"
        assert fields["tau_ns"].line == 4
        assert "#" not in fields

    def test_missing_equals(self) -> None:
        """Every non-comment line needs '='."""
        with pytest.raises(ParseError) as exc_info:
            parse_config_fields("mode = rate\neta_det 0.9\n")

        assert exc_info.value.line == 2

    def test_repeated_key(self) -> None:
        """A key may appear once."""
        with pytest.raises(ParseError) as exc_info:
            parse_config_fields("L = 10\nL = 20\n")

        assert exc_info.value.line == 2
        assert exc_info.value.field == "L"

    def test_empty_key(self) -> None:
        """'= value' has no key."""
        with pytest.raises(ParseError):
            parse_config_fields(" = 3\n")


class TestParseConfig:
    """Tests for building SweepConfig from documents and flags."""

    def test_defaults(self) -> None:
        """An empty document gives the documented defaults."""
        cfg = parse_config("")

        assert cfg.mode == "rate"
        assert cfg.eta_det == 1.0
        assert cfg.tau_ns == 67.0
        assert cfg.attenuation_length_km == 22.0
        assert cfg.grid.points == 200
        assert cfg.grid.spacing == "log"
        assert cfg.source == RatioSourceSpec()

    def test_qmax_document(self) -> None:
        """A Q^max document fills the map grid and the QND ratio spec."""
        cfg = parse_config(QMAX_DOCUMENT)

        assert cfg.mode == "qmax"
        assert cfg.qnd_source == RatioSourceSpec(zero=0.2, ratio=0.0)
        assert cfg.qmax_cells() == [(0.1, 0.01), (0.1, 0.25)]
        assert cfg.grid.points == 40
        assert cfg.tau_s == pytest.approx(67e-9)

    def test_source_styles(self) -> None:
        """Explicit and PDC styles are recognized per role."""
        cfg = parse_config("source = 0.1, 0.8, 0.1\nmu = 0.05\n")

        assert cfg.source == ExplicitSourceSpec(probs=(0.1, 0.8, 0.1))
        assert cfg.qnd_source == PdcSourceSpec(brightness=0.05)

    def test_flags_override_document(self) -> None:
        """Overrides win over document values."""
        cfg = parse_config("eta_det = 0.9\nL = 50\n", {"eta_det": "0.8"})

        assert cfg.eta_det == 0.8
        assert cfg.distance_km == 50.0

    def test_source_flag_replaces_document_style(self) -> None:
        """A source flag drops every document key of that role."""
        cfg = parse_config("p0 = 0.1\nP = 0.2\nq0 = 0.3\n", {"source": "0, 1"})

        assert cfg.source == ExplicitSourceSpec(probs=(0.0, 1.0))
        assert cfg.qnd_source == RatioSourceSpec(zero=0.3, ratio=0.0)

    def test_conflicting_source_styles(self) -> None:
        """Two styles for one role in the same document are refused."""
        with pytest.raises(ConflictingSourceSpec) as exc_info:
            parse_config("q0 = 0.2\nqnd_source = 0.2, 0.8\n")

        assert exc_info.value.line == 2

    def test_unknown_key(self) -> None:
        """Unknown keys are reported with their line."""
        with pytest.raises(ParseError) as exc_info:
            parse_config("eta_det = 0.9\nbrightness = 3\n")

        assert exc_info.value.line == 2
        assert exc_info.value.field == "brightness"

    def test_unconvertible_value(self) -> None:
        """Non-numeric values for numeric keys are reported."""
        with pytest.raises(ParseError) as exc_info:
            parse_config("L_points = many\n")

        assert exc_info.value.field == "L_points"

    def test_out_of_range_value(self) -> None:
        """Validation failures point at the key and line."""
        with pytest.raises(ParseError) as exc_info:
            parse_config("mode = sweep\neta_det = 1.5\n")

        assert exc_info.value.field == "eta_det"
        assert exc_info.value.line == 2

    def test_invalid_source_value(self) -> None:
        """Source validation errors carry the source key."""
        with pytest.raises(ParseError) as exc_info:
            parse_config("q0 = 1.2\n")

        assert exc_info.value.field == "q0"

    def test_check_pdc_needs_both_brightnesses(self) -> None:
        """check-pdc mode without mu is refused."""
        with pytest.raises(ParseError):
            parse_config("mode = check-pdc\nlambda = 0.5\n")

    def test_qmax_needs_ratio_qnd_source(self) -> None:
        """qmax mode needs q0 rather than an explicit QND distribution."""
        with pytest.raises(ParseError):
            parse_config("mode = qmax\nqnd_source = 0.2, 0.8\n")


class TestEmitConfig:
    """Tests for writing configurations back out."""

    @pytest.mark.parametrize(
        "document",
        [
            "",
            QMAX_DOCUMENT,
            "mode = sweep\nsource = 0.1, 0.7, 0.2\nmu = 0.013\nL_spacing = linear\nthreads = 4\n",
            "mode = verify\npoints = 7\nseed = 3\nabs_tol = 1e-10\nout = report.csv\n",
        ],
    )
    def test_round_trip(self, document: str) -> None:
        """emit_config output parses back to an equal config."""
        cfg = parse_config(document)

        assert parse_config(emit_config(cfg)) == cfg

    def test_floats_keep_all_digits(self) -> None:
        """Values such as 0.1 + 0.2 survive emission."""
        cfg = SweepConfig(eta_det=0.1 + 0.2)

        assert parse_config(emit_config(cfg)).eta_det == 0.1 + 0.2
