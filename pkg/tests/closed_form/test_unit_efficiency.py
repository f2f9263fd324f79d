"""
Tests for the unit-efficiency closed forms.
"""

import itertools
from fractions import Fraction

import pytest

from src.closed_form import (
    compute_probabilities,
    unit_efficiency_probabilities,
    unit_efficiency_probability_set,
    unit_efficiency_rate,
)
from src.core.exceptions import DegenerateDenominator
from src.devices.sources import make_statistics, perfect_source, statistics_from_ratios
from src.models.rate import SumContext
from src.models.sources import SourceRoles
from src.rate import rate_from_probabilities

RATIO_GRID = list(
    itertools.product([0.0, 0.2], [0.0, 0.1, 0.4], [0.1, 0.3], [0.05, 0.25], [0.02, 0.3, 0.9])
)


def _roles(p0: float, P: float, q0: float, Q: float) -> SourceRoles:
    return SourceRoles(alice_bob=statistics_from_ratios(p0, P), qnd=statistics_from_ratios(q0, Q))


def _ideal(roles: SourceRoles, eta_ch: float) -> SumContext:
    return SumContext(roles=roles, eta_ch=eta_ch, eta_det=1.0, eta_det_bsm=1.0)


class TestUnitEfficiencyForms:
    """Tests for the short polynomials at eta_det = 1, tau = 0."""

    def test_perfect_sources(self) -> None:
        """p_QND = eta/16 and p_c = eta^2/1024."""
        roles = SourceRoles(alice_bob=perfect_source(), qnd=perfect_source())
        values = unit_efficiency_probabilities(roles, 0.4)

        assert values["p_qnd"] == pytest.approx(0.4 / 16)
        assert values["p_c"] == pytest.approx(0.16 / 1024)
        assert values["p_nc"] == 0.0

    def test_exact(self) -> None:
        """exact=True returns Fractions."""
        roles = SourceRoles(
            alice_bob=make_statistics([0.0, 1.0]), qnd=make_statistics([0.0, 0.5, 0.5])
        )
        values = unit_efficiency_probabilities(roles, 0.5, exact=True)

        # p1 (2 q2 (1 - eta) + 3 q1 eta) / 48 = (1/2 + 3/4) / 48
        assert values["p_qnd"] == Fraction(5, 192)
        assert values["p_c"] == Fraction(1, 16384)
        assert values["p_nc"] == Fraction(0)

    def test_probability_set_layout(self) -> None:
        """Both bases carry the same p_c and p_nc."""
        probs = unit_efficiency_probability_set(_roles(0.1, 0.1, 0.2, 0.1), 0.3)

        assert probs.p_c_z == probs.p_c_x
        assert probs.p_nc_z == probs.p_nc_x == 0.0

    @pytest.mark.parametrize(("p0", "P", "q0", "Q", "eta"), RATIO_GRID[::5])
    def test_closed_form_reduces_to_unit_forms(
        self, p0: float, P: float, q0: float, Q: float, eta: float
    ) -> None:
        """The general sums collapse to the polynomials at unit efficiency."""
        roles = _roles(p0, P, q0, Q)
        general = compute_probabilities(_ideal(roles, eta))
        unit = unit_efficiency_probability_set(roles, eta)

        assert general.p_qnd == pytest.approx(unit.p_qnd, rel=1e-12, abs=1e-15)
        assert general.p_c_z == pytest.approx(unit.p_c_z, rel=1e-12, abs=1e-15)
        assert general.p_nc_z == pytest.approx(0.0, abs=1e-15)
        assert general.p_c_x == pytest.approx(unit.p_c_x, rel=1e-12, abs=1e-15)
        assert general.p_nc_x == pytest.approx(0.0, abs=1e-15)


class TestUnitEfficiencyRate:
    """Tests for the closed-form rate at unit efficiency."""

    @pytest.mark.parametrize(("p0", "P", "q0", "Q", "eta"), RATIO_GRID)
    def test_rate_matches_composed_rate(
        self, p0: float, P: float, q0: float, Q: float, eta: float
    ) -> None:
        """The one-line rate equals the rate assembled from the probabilities."""
        roles = _roles(p0, P, q0, Q)
        composed = rate_from_probabilities(unit_efficiency_probability_set(roles, eta)).rate

        assert unit_efficiency_rate(roles, eta) == pytest.approx(composed, rel=1e-10, abs=1e-300)

    def test_perfect_sources(self) -> None:
        """Single pairs give eta/4."""
        roles = SourceRoles(alice_bob=perfect_source(), qnd=perfect_source())

        assert unit_efficiency_rate(roles, 1.0) == pytest.approx(0.25)
        assert unit_efficiency_rate(roles, 0.2) == pytest.approx(0.05)

    def test_small_transmittance_asymptote(self) -> None:
        """R / eta^2 tends to 3 p1 q1^2 / (8 q2)."""
        roles = SourceRoles(
            alice_bob=make_statistics([0.2, 0.8]), qnd=make_statistics([0.2, 0.5, 0.3])
        )
        eta = 1e-3

        assert unit_efficiency_rate(roles, eta) / eta**2 == pytest.approx(
            3 * 0.8 * 0.25 / (8 * 0.3), rel=0.01
        )

    def test_zero_numerator(self) -> None:
        """No single pairs from the QND source means no key."""
        roles = SourceRoles(alice_bob=perfect_source(), qnd=make_statistics([0.5, 0.0, 0.5]))

        assert unit_efficiency_rate(roles, 0.5) == 0.0

    def test_degenerate_denominator(self) -> None:
        """A non-positive denominator with a live numerator is reported."""
        roles = SourceRoles(alice_bob=perfect_source(), qnd=perfect_source())

        with pytest.raises(DegenerateDenominator):
            unit_efficiency_rate(roles, -0.5)
