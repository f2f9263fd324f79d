"""
Tests for the brute-force AMDI-QKD circuit.
"""

import pytest

from src.core.exceptions import CapExceeded
from src.devices.channel_detector import channel_transmittance
from src.devices.sources import make_statistics, perfect_source
from src.models.sources import SourceRoles
from src.models.system import SystemParams
from src.oracle.fock import FockOperator, fock_state, tensor
from src.oracle.pipeline import (
    bsm_success_patterns,
    bsm_success_probability,
    heralded_side,
    oracle_pipeline,
    spurious_pair_filter_probability,
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
    """Unit detectors, no feedforward, 50 km link."""
    return SystemParams(distance_km=50.0, eta_det=1.0, tau_s=0.0)


@pytest.fixture
def crossed_photons() -> FockOperator:
    """An H photon in port e and a V photon in port f."""
    return tensor(
        fock_state(["e"], {"e_H": 1}, photon_cap=1),
        fock_state(["f"], {"f_V": 1}, photon_cap=1),
    )


# =============================================================================
# Spurious Pair Filter
# =============================================================================


class TestSpuriousPairFilter:
    """Tests for the Hadamard-augmented BSM on two photons in one port."""

    @pytest.mark.parametrize("efficiency", [0.5, 1.0])
    def test_hadamards_block_spurious_pairs(self, efficiency: float) -> None:
        """With Hadamards the event never heralds."""
        assert spurious_pair_filter_probability(efficiency) == pytest.approx(0.0, abs=1e-15)

    @pytest.mark.parametrize("efficiency", [0.5, 1.0])
    def test_plain_bsm_accepts_spurious_pairs(self, efficiency: float) -> None:
        """Without Hadamards it succeeds with probability efficiency**2."""
        assert spurious_pair_filter_probability(efficiency, hadamard=False) == pytest.approx(
            efficiency**2
        )

    def test_plain_bsm_on_orthogonal_photons(self, crossed_photons: FockOperator) -> None:
        """H and V photons always give one H and one V click without Hadamards."""
        assert bsm_success_probability(crossed_photons, "e", "f", 0.8, hadamard=False) == (
            pytest.approx(0.64)
        )

    def test_hadamard_bsm_on_orthogonal_photons(self, crossed_photons: FockOperator) -> None:
        """With Hadamards only the singlet component of |HV> is heralded."""
        assert bsm_success_probability(crossed_photons, "e", "f", 1.0) == pytest.approx(0.5)

    def test_four_success_patterns(self) -> None:
        """Every pattern has one H and one V click."""
        patterns = bsm_success_patterns("x", "y", 0.9)

        assert len(patterns) == 4
        for pattern in patterns:
            assert sum(pattern.requirements.values()) == 2
            assert pattern.efficiency == 0.9


# =============================================================================
# Pipeline
# =============================================================================


class TestOraclePipeline:
    """Tests for the five oracle probabilities."""

    def test_perfect_sources_ideal_detectors(
        self, perfect_roles: SourceRoles, ideal_params: SystemParams
    ) -> None:
        """p_QND = eta/16, p_c = eta^2/1024 in both bases, no errors."""
        eta = channel_transmittance(ideal_params)
        probs = oracle_pipeline(perfect_roles, ideal_params)

        assert probs.p_qnd == pytest.approx(eta / 16, abs=1e-14)
        assert probs.p_c_z == pytest.approx(eta**2 / 1024, abs=1e-14)
        assert probs.p_nc_z == pytest.approx(0.0, abs=1e-15)
        assert probs.p_c_x == pytest.approx(eta**2 / 1024, abs=1e-14)
        assert probs.p_nc_x == pytest.approx(0.0, abs=1e-15)

    def test_heralded_side_trace(
        self, perfect_roles: SourceRoles, ideal_params: SystemParams
    ) -> None:
        """The Z-basis heralded operator on b carries p_QND."""
        eta = channel_transmittance(ideal_params)
        gamma = heralded_side(perfect_roles, eta, 1.0, z_basis=True, photon_cap=6)

        assert gamma.labels == ("b",)
        assert gamma.trace() == pytest.approx(eta / 16)
        assert gamma.is_hermitian()

    def test_vacuum_qnd_source_never_heralds(self, ideal_params: SystemParams) -> None:
        """Without QND photons the c port cannot see one H and one V."""
        roles = SourceRoles(alice_bob=perfect_source(), qnd=make_statistics([1.0, 0.0]))

        assert oracle_pipeline(roles, ideal_params).p_qnd == pytest.approx(0.0, abs=1e-15)

    def test_cap_too_small(self, ideal_params: SystemParams) -> None:
        """The register must hold four pairs' worth of photons per side."""
        roles = SourceRoles(
            alice_bob=make_statistics([0.1, 0.6, 0.3]), qnd=make_statistics([0.1, 0.6, 0.3])
        )

        with pytest.raises(CapExceeded):
            oracle_pipeline(roles, ideal_params, photon_cap=6)

    @pytest.mark.slow
    def test_mixed_and_coherent_sources_agree(self) -> None:
        """Coherences between pair numbers never reach a detection probability."""
        roles = SourceRoles(
            alice_bob=make_statistics([0.2, 0.5, 0.3]), qnd=make_statistics([0.3, 0.6, 0.1])
        )
        params = SystemParams(distance_km=30.0, eta_det=0.8, tau_s=67e-9)

        mixed = oracle_pipeline(roles, params).as_dict()
        coherent = oracle_pipeline(roles, params, coherent_sources=True).as_dict()

        for name, value in mixed.items():
            assert coherent[name] == pytest.approx(value, abs=1e-12), name

    @pytest.mark.slow
    def test_multi_pair_probabilities_are_valid(self) -> None:
        """Two-pair sources give probabilities in [0, 1] with p_c <= p_QND."""
        roles = SourceRoles(
            alice_bob=make_statistics([0.1, 0.6, 0.3]), qnd=make_statistics([0.2, 0.7, 0.1])
        )
        probs = oracle_pipeline(roles, SystemParams(distance_km=20.0, eta_det=0.9))

        for value in probs.as_dict().values():
            assert 0.0 <= value <= 1.0
        assert probs.p_nc_z > 0
        assert probs.p_c_z <= probs.p_qnd
