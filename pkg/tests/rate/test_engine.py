"""
Tests for the rate assembly, bounds and necessary conditions.
"""

import math

import numpy as np
import pytest

from src.closed_form import unit_efficiency_rate
from src.core.exceptions import DomainError, InvalidParameter
from src.devices.channel_detector import sum_context
from src.devices.sources import make_statistics, pdc_statistics, perfect_source, vacuum_source
from src.models.rate import ProbabilitySet, SumContext
from src.models.sources import SourceRoles
from src.models.system import SystemParams
from src.rate import (
    beats_bound,
    binary_entropy,
    default_distance_grid,
    necessary_condition_holds,
    necessary_q2_max,
    pdc_condition_check,
    plob_bound,
    rate_from_probabilities,
    secret_key_rate,
)

# =============================================================================
# Test Fixtures
# =============================================================================


@pytest.fixture
def perfect_roles() -> SourceRoles:
    """Single-pair user and QND sources."""
    return SourceRoles(alice_bob=perfect_source(), qnd=perfect_source())


@pytest.fixture
def ideal_params() -> SystemParams:
    """Unit detectors and no feedforward delay."""
    return SystemParams(eta_det=1.0, tau_s=0.0)


def _unit_rate(ctx: SumContext) -> float:
    return unit_efficiency_rate(ctx.roles, ctx.eta_ch)


def _probs(**overrides: float) -> ProbabilitySet:
    values = {"p_qnd": 1 / 16, "p_c_z": 1 / 1024, "p_nc_z": 0.0, "p_c_x": 1 / 1024, "p_nc_x": 0.0}
    return ProbabilitySet(**(values | overrides))


# =============================================================================
# Entropy and Rate Assembly
# =============================================================================


class TestBinaryEntropy:
    """Tests for h(x)."""

    def test_endpoints(self) -> None:
        """h(0) = h(1) = 0."""
        assert binary_entropy(0.0) == 0.0
        assert binary_entropy(1.0) == 0.0

    def test_maximum(self) -> None:
        """h(1/2) = 1."""
        assert binary_entropy(0.5) == pytest.approx(1.0)

    def test_reference_value(self) -> None:
        """h(0.11) is close to one half."""
        assert binary_entropy(0.11) == pytest.approx(0.499916, abs=1e-6)

    @pytest.mark.parametrize("x", [-0.01, 1.01])
    def test_domain(self, x: float) -> None:
        """Arguments outside [0, 1] raise DomainError."""
        with pytest.raises(DomainError):
            binary_entropy(x)


class TestRateFromProbabilities:
    """Tests for assembling the rate from the five probabilities."""

    def test_perfect_sources_at_unit_transmittance(self) -> None:
        """p_s = 1/2, p_BSM = 1/2, no errors: R = 1/4."""
        breakdown = rate_from_probabilities(_probs())

        assert breakdown.p_s == pytest.approx(0.5)
        assert breakdown.p_bsm == pytest.approx(0.5)
        assert breakdown.rate == pytest.approx(0.25)
        assert not breakdown.degenerate
        assert not breakdown.error_rate_flag

    def test_error_rates(self) -> None:
        """e = p_nc / (p_c + p_nc) in each basis."""
        breakdown = rate_from_probabilities(_probs(p_nc_z=1 / 3072, p_nc_x=1 / 1024))

        assert breakdown.e_z == pytest.approx(0.25)
        assert breakdown.e_x == pytest.approx(0.5)

    def test_negative_bracket_clamps_to_zero(self) -> None:
        """A key fraction below zero gives no key, not a negative rate."""
        breakdown = rate_from_probabilities(_probs(p_nc_z=1 / 1024, p_nc_x=1 / 1024))

        assert breakdown.rate == 0.0

    def test_high_error_rate_is_flagged(self) -> None:
        """e above 1/2 is kept and flagged."""
        breakdown = rate_from_probabilities(_probs(p_nc_x=3 / 1024))

        assert breakdown.e_x == pytest.approx(0.75)
        assert breakdown.error_rate_flag

    def test_no_heralding_is_degenerate(self) -> None:
        """p_QND = 0 gives a zero, flagged rate."""
        breakdown = rate_from_probabilities(
            _probs(p_qnd=0.0, p_c_z=0.0, p_c_x=0.0)
        )

        assert breakdown.rate == 0.0
        assert breakdown.degenerate

    def test_empty_basis_is_degenerate(self) -> None:
        """No X-basis events at all leaves e_X undefined."""
        breakdown = rate_from_probabilities(_probs(p_c_x=0.0))

        assert breakdown.degenerate
        assert breakdown.rate == 0.0

    def test_error_correction_and_sifting(self) -> None:
        """f_ec scales h(e_Z); p_Z^2 scales the rate."""
        probs = _probs(p_nc_z=1 / 9216)
        full = rate_from_probabilities(probs)
        sifted = rate_from_probabilities(probs, f_ec=1.2, p_z_squared=0.5)
        e_z = full.e_z

        assert e_z == pytest.approx(0.1)
        assert sifted.rate == pytest.approx(
            0.5 * full.p_s * full.p_bsm * (1 - 1.2 * binary_entropy(e_z))
        )

    def test_breakdown_round_trips_probabilities(self) -> None:
        """The breakdown hands back the probabilities it was built from."""
        probs = _probs(p_nc_z=1e-5)

        assert rate_from_probabilities(probs).probabilities() == probs


class TestSecretKeyRate:
    """Tests for the closed-form rate at an operating point."""

    @pytest.mark.parametrize("distance", [0.0, 10.0, 50.0, 150.0])
    def test_perfect_sources(
        self, perfect_roles: SourceRoles, ideal_params: SystemParams, distance: float
    ) -> None:
        """R = eta_ch / 4 for single pairs and ideal detectors."""
        params = ideal_params.at_distance(distance)
        ctx = sum_context(perfect_roles, params)

        assert secret_key_rate(ctx).rate == pytest.approx(ctx.eta_ch / 4, rel=1e-12)

    def test_vacuum_qnd_source_is_degenerate(
        self, ideal_params: SystemParams
    ) -> None:
        """q0 = 1 never heralds."""
        roles = SourceRoles(alice_bob=perfect_source(), qnd=vacuum_source())
        breakdown = secret_key_rate(sum_context(roles, ideal_params.at_distance(20.0)))

        assert breakdown.degenerate
        assert breakdown.rate == 0.0

    def test_injected_probabilities(self, perfect_roles: SourceRoles) -> None:
        """A probability function can be swapped in."""
        ctx = sum_context(perfect_roles, SystemParams())

        breakdown = secret_key_rate(ctx, probabilities_fn=lambda _: _probs())

        assert breakdown.rate == pytest.approx(0.25)


# =============================================================================
# Bounds
# =============================================================================


class TestPlobBound:
    """Tests for the repeaterless bound."""

    def test_reference_value(self) -> None:
        """-log2(1 - 1/4)."""
        assert plob_bound(0.5) == pytest.approx(0.415037, abs=1e-6)

    def test_zero(self) -> None:
        """No transmission, no capacity."""
        assert plob_bound(0.0) == 0.0

    def test_small_transmittance_is_accurate(self) -> None:
        """log1p keeps the bound accurate where 1 - eta^2 rounds to one."""
        eta = 1e-9

        assert plob_bound(eta) == pytest.approx(eta**2 / math.log(2), rel=1e-9)

    def test_taylor_floor(self) -> None:
        """The bound never drops below 1.44 eta^2."""
        for eta in np.linspace(0.0, 0.99, 100):
            assert plob_bound(float(eta)) >= 1.44 * eta**2

    @pytest.mark.parametrize("eta", [1.0, -0.1])
    def test_domain(self, eta: float) -> None:
        """eta must lie in [0, 1)."""
        with pytest.raises(DomainError):
            plob_bound(eta)


class TestNecessaryCondition:
    """Tests for the necessary condition on the QND statistics."""

    def test_q2_max(self) -> None:
        """25 p1 q1^2 / 96 when below 1 - q1."""
        assert necessary_q2_max(1.0, 0.8) == pytest.approx(1 / 6)

    def test_q2_max_capped_by_normalization(self) -> None:
        """q2 can never exceed 1 - q1."""
        assert necessary_q2_max(1.0, 0.95) == pytest.approx(0.05)

    def test_condition_holds(self) -> None:
        """Statistics either side of the threshold."""
        good = SourceRoles(alice_bob=perfect_source(), qnd=make_statistics([0.1, 0.8, 0.1]))
        bad = SourceRoles(alice_bob=perfect_source(), qnd=make_statistics([0.0, 0.7, 0.3]))

        assert necessary_condition_holds(good)
        assert not necessary_condition_holds(bad)

    def test_pdc_reference_point(self) -> None:
        """lambda = mu = 1 gives 1/32, far below 36/25."""
        result = pdc_condition_check(1.0, 1.0)

        assert result.lhs == pytest.approx(1 / 32)
        assert result.rhs == pytest.approx(1.44)
        assert not result.satisfiable

    def test_pdc_supremum(self) -> None:
        """The left side approaches 4/27 at lambda = 1/2, mu -> 0."""
        assert pdc_condition_check(0.5, 1e-12).lhs == pytest.approx(4 / 27, rel=1e-9)

    def test_pdc_never_satisfiable(self) -> None:
        """No PDC brightness pair meets the condition."""
        rng = np.random.default_rng(7)
        lams = 10 ** rng.uniform(-4, 2, 10_000)
        mus = 10 ** rng.uniform(-4, 2, 10_000)

        for lam, mu in zip(lams, mus, strict=True):
            result = pdc_condition_check(float(lam), float(mu))
            assert result.lhs <= 4 / 27 + 1e-15
            assert not result.satisfiable

    @pytest.mark.parametrize(("lam", "mu"), [(0.0, 0.1), (0.1, -1.0)])
    def test_pdc_rejects_non_positive(self, lam: float, mu: float) -> None:
        """Brightness must be positive."""
        with pytest.raises(InvalidParameter):
            pdc_condition_check(lam, mu)


# =============================================================================
# Distance Grids and Bound Comparison
# =============================================================================


class TestDistanceGrid:
    """Tests for default_distance_grid."""

    def test_log_grid(self) -> None:
        """Endpoints included, geometric spacing."""
        grid = default_distance_grid(1.0, 1000.0, 4, "log")

        assert grid == pytest.approx([1.0, 10.0, 100.0, 1000.0])

    def test_linear_grid(self) -> None:
        """Arithmetic spacing."""
        assert default_distance_grid(0.5, 2.5, 3, "linear") == pytest.approx([0.5, 1.5, 2.5])

    def test_default_grid(self) -> None:
        """200 log-spaced points from 1 to 1000 km."""
        grid = default_distance_grid()

        assert len(grid) == 200
        assert grid[0] == pytest.approx(1.0)
        assert grid[-1] == pytest.approx(1000.0)

    @pytest.mark.parametrize(
        ("start", "stop", "points", "spacing"),
        [(1.0, 10.0, 0, "log"), (0.0, 10.0, 5, "log"), (10.0, 1.0, 5, "log"), (1.0, 2.0, 3, "cubic")],
    )
    def test_invalid(self, start: float, stop: float, points: int, spacing: str) -> None:
        """Bad grids raise InvalidParameter."""
        with pytest.raises(InvalidParameter):
            default_distance_grid(start, stop, points, spacing)


class TestBeatsBound:
    """Tests for the comparison with the repeaterless bound."""

    def test_perfect_sources_beat_bound(
        self, perfect_roles: SourceRoles, ideal_params: SystemParams
    ) -> None:
        """eta/4 overtakes -log2(1 - eta^2) at long distance."""
        result = beats_bound(perfect_roles, ideal_params, default_distance_grid(1, 500, 30))

        assert result.beats
        assert result.witness_L is not None
        assert result.witness_L > 70.0
        assert result.margin > 0

    def test_vacuum_qnd_never_beats(self, ideal_params: SystemParams) -> None:
        """A degenerate configuration cannot beat the bound."""
        roles = SourceRoles(alice_bob=perfect_source(), qnd=vacuum_source())
        result = beats_bound(roles, ideal_params, default_distance_grid(1, 500, 10))

        assert not result.beats
        assert result.witness_L is None

    def test_empty_grid(self, perfect_roles: SourceRoles, ideal_params: SystemParams) -> None:
        """An empty grid is rejected."""
        with pytest.raises(InvalidParameter):
            beats_bound(perfect_roles, ideal_params, [])

    def test_rate_override(self, perfect_roles: SourceRoles, ideal_params: SystemParams) -> None:
        """A zero rate never beats the bound."""
        result = beats_bound(perfect_roles, ideal_params, [10.0, 100.0], rate_fn=lambda _: 0.0)

        assert not result.beats
        assert result.margin < 0

    def test_asymptotic_rate(self) -> None:
        """At eta = 1e-3 the closed-form rate is within 1% of 3 p1 q1^2 eta^2 / (8 q2)."""
        roles = SourceRoles(
            alice_bob=make_statistics([0.2, 0.8]), qnd=make_statistics([0.2, 0.5, 0.3])
        )
        ctx = SumContext(roles=roles, eta_ch=1e-3, eta_det=1.0, eta_det_bsm=1.0)

        assert secret_key_rate(ctx).rate / 1e-6 == pytest.approx(3 * 0.8 * 0.25 / 2.4, rel=0.01)

    def test_necessary_condition_is_sound(self, ideal_params: SystemParams) -> None:
        """Statistics that beat the bound always satisfy the necessary condition."""
        rng = np.random.default_rng(11)
        grid = default_distance_grid(1, 1000, 40)

        for _ in range(200):
            p = rng.dirichlet(np.ones(3))
            q = rng.dirichlet(np.ones(3))
            roles = SourceRoles(
                alice_bob=make_statistics(list(p / max(1.0, p.sum()))),
                qnd=make_statistics(list(q / max(1.0, q.sum()))),
            )
            if beats_bound(roles, ideal_params, grid, rate_fn=_unit_rate).beats:
                assert necessary_condition_holds(roles)

    @pytest.mark.slow
    def test_necessary_condition_is_sound_for_closed_form(
        self, ideal_params: SystemParams
    ) -> None:
        """The same soundness check through the full closed-form rate on 200 draws."""
        rng = np.random.default_rng(5)
        grid = default_distance_grid(1, 1000, 20)
        beating = violating = 0

        for _ in range(200):
            p = rng.dirichlet(np.ones(3))
            q1 = rng.uniform(0.2, 0.9)
            q2 = rng.uniform(0, min(0.1, 1 - q1))
            roles = SourceRoles(
                alice_bob=make_statistics(list(p / max(1.0, p.sum()))),
                qnd=make_statistics([max(0.0, 1 - q1 - q2), q1, q2]),
            )
            holds = necessary_condition_holds(roles)
            violating += not holds
            if beats_bound(roles, ideal_params, grid).beats:
                beating += 1
                assert holds, roles

        assert beating > 0
        assert violating > 0

    @pytest.mark.slow
    def test_pdc_sources_never_beat(self) -> None:
        """Sampled PDC brightnesses stay below the bound on the default grid."""
        rng = np.random.default_rng(29)
        grid = default_distance_grid()

        for _ in range(16):
            lam, mu = (float(x) for x in 10 ** rng.uniform(-3, 0.5, size=2))
            roles = SourceRoles(alice_bob=pdc_statistics(lam), qnd=pdc_statistics(mu))
            params = SystemParams(
                eta_det=float(rng.uniform(0.5, 1.0)), tau_s=float(rng.choice([0.0, 67e-9]))
            )

            assert not beats_bound(roles, params, grid).beats, (lam, mu)
