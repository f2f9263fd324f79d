"""
Channel and feedforward transmittances, and PNR detector POVM weights.

Dark counts are zero throughout. Feedforward loss is folded into the BSM
detector efficiency rather than modelled as a separate stage.
"""

import math

from scipy.special import gammaln

from src.core.constants import EXACT_BINOMIAL_LIMIT, TRANSMITTANCE_FLOOR
from src.core.exceptions import InvalidParameter
from src.models.rate import SumContext
from src.models.sources import SourceRoles
from src.models.system import SystemParams

# =============================================================================
# Transmittances
# =============================================================================


def channel_transmittance(params: SystemParams) -> float:
    """One-side channel transmittance exp(-L / (2 L_att))."""
    return _floored(math.exp(-params.distance_km / (2 * params.attenuation_length_km)))


def feedforward_transmittance(params: SystemParams) -> float:
    """
    Transmittance of the fiber delay used while the switches are set.

    The photon travels tau * c metres; L_att is converted from km to m.
    """
    path_m = params.tau_s * params.c_fiber_m_per_s
    return _floored(math.exp(-path_m / (params.attenuation_length_km * 1000.0)))


def bsm_detector_efficiency(params: SystemParams) -> float:
    """Effective BSM detector efficiency eta_det * eta_f."""
    return params.eta_det * feedforward_transmittance(params)


def attenuation_length_from_loss(alpha_db_per_km: float) -> float:
    """
    Convert a fiber loss coefficient in dB/km to an attenuation length in km.

    Raises:
        InvalidParameter: alpha_db_per_km <= 0.
    """
    if alpha_db_per_km <= 0:
        raise InvalidParameter(f"loss coefficient must be positive, got {alpha_db_per_km}")
    return 10.0 / (alpha_db_per_km * math.log(10.0))


def _floored(value: float) -> float:
    return 0.0 if value < TRANSMITTANCE_FLOOR else value


# =============================================================================
# Detector POVM
# =============================================================================


def pnr_weight(k: int, n: int, eta: float) -> float:
    """
    Probability that a PNR detector of efficiency eta reports k of n photons.

    Binomials are exact integers up to n = EXACT_BINOMIAL_LIMIT and computed
    through log-gamma beyond.

    Example:
        >>> pnr_weight(1, 2, 0.5)
        0.5
    """
    if k < 0 or n < 0 or k > n:
        return 0.0
    if n <= EXACT_BINOMIAL_LIMIT:
        return math.comb(n, k) * eta**k * (1 - eta) ** (n - k)

    # Boundary efficiencies make one of the log terms -inf
    if eta == 0.0:
        return 1.0 if k == 0 else 0.0
    if eta == 1.0:
        return 1.0 if k == n else 0.0
    log_weight = (
        gammaln(n + 1)
        - gammaln(k + 1)
        - gammaln(n - k + 1)
        + k * math.log(eta)
        + (n - k) * math.log1p(-eta)
    )
    return float(math.exp(log_weight))


# =============================================================================
# Context Construction
# =============================================================================


def sum_context(roles: SourceRoles, params: SystemParams) -> SumContext:
    """Evaluation context for the closed-form sums at params.distance_km."""
    return SumContext(
        roles=roles,
        eta_ch=channel_transmittance(params),
        eta_det=params.eta_det,
        eta_det_bsm=bsm_detector_efficiency(params),
    )
