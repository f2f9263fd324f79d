"""
Closed forms at unit detector efficiency and zero feedforward time.

Only the terms in which every emitted photon is either detected or lost in
the channel survive, which leaves short polynomials in p_1, q_1, q_2.
"""

from fractions import Fraction

from src.closed_form.combinatorics import Number, to_number
from src.core.exceptions import DegenerateDenominator
from src.models.rate import ProbabilitySet
from src.models.sources import SourceRoles


def unit_efficiency_probabilities(
    roles: SourceRoles, eta_ch: float, exact: bool = False
) -> dict[str, Number]:
    """
    p_QND, p_c and p_nc (identical in both bases) at eta_det = 1, tau = 0.

    Returns:
        Mapping with keys p_qnd, p_c, p_nc.
    """
    p1 = to_number(roles.alice_bob.p(1), exact)
    q1 = to_number(roles.qnd.p(1), exact)
    q2 = to_number(roles.qnd.p(2), exact)
    eta = to_number(eta_ch, exact)
    return {
        "p_qnd": p1 * (2 * q2 * (1 - eta) + 3 * q1 * eta) / 48,
        "p_c": p1**2 * q1**2 * eta**2 / 1024,
        "p_nc": Fraction(0) if exact else 0.0,
    }


def unit_efficiency_probability_set(roles: SourceRoles, eta_ch: float) -> ProbabilitySet:
    """unit_efficiency_probabilities laid out as a ProbabilitySet."""
    values = unit_efficiency_probabilities(roles, eta_ch)
    return ProbabilitySet(
        p_qnd=float(values["p_qnd"]),
        p_c_z=float(values["p_c"]),
        p_nc_z=float(values["p_nc"]),
        p_c_x=float(values["p_c"]),
        p_nc_x=float(values["p_nc"]),
    )


def unit_efficiency_rate(roles: SourceRoles, eta_ch: float) -> float:
    """
    3 p_1 q_1^2 eta^2 / (8 q_2 + 4 (3 q_1 - 2 q_2) eta).

    A vanishing numerator gives zero before the denominator is examined.

    Raises:
        DegenerateDenominator: Non-positive denominator with a non-zero numerator.
    """
    p1 = roles.alice_bob.p(1)
    q1 = roles.qnd.p(1)
    q2 = roles.qnd.p(2)
    numerator = 3 * p1 * q1**2 * eta_ch**2
    if numerator == 0:
        return 0.0
    denominator = 8 * q2 + 4 * (3 * q1 - 2 * q2) * eta_ch
    if denominator <= 0:
        raise DegenerateDenominator(
            f"8 q2 + 4 (3 q1 - 2 q2) eta_ch = {denominator} for q1={q1}, q2={q2}, eta_ch={eta_ch}"
        )
    return numerator / denominator
