"""
Secret key rate, the repeaterless bound and the analytical conditions.

Usage:
    from src.rate.engine import secret_key_rate, beats_bound

    breakdown = secret_key_rate(ctx)
    comparison = beats_bound(roles, params)
"""

import math
from collections.abc import Callable, Sequence

import numpy as np
import structlog

from src.closed_form import compute_probabilities
from src.core.constants import (
    DEFAULT_L_POINTS,
    DEFAULT_L_SPACING,
    DEFAULT_L_START_KM,
    DEFAULT_L_STOP_KM,
    EPS_NORM,
    NECESSARY_Q2_COEFFICIENT,
    PDC_REQUIRED_THRESHOLD,
)
from src.core.exceptions import DomainError, InvalidParameter
from src.core.telemetry import get_tracer, trace_function, traced_operation
from src.devices.channel_detector import channel_transmittance, sum_context
from src.models.rate import (
    BoundComparison,
    PdcConditionResult,
    ProbabilitySet,
    RateBreakdown,
    SumContext,
)
from src.models.sources import SourceRoles
from src.models.system import SystemParams

logger = structlog.get_logger(__name__)
tracer = get_tracer("amdiqkd.rate.engine")

ProbabilityFn = Callable[[SumContext], ProbabilitySet]
RateFn = Callable[[SumContext], float]


# =============================================================================
# Entropy and Rate
# =============================================================================


def binary_entropy(x: float) -> float:
    """
    h(x) = -x log2 x - (1-x) log2 (1-x), with h(0) = h(1) = 0.

    Raises:
        DomainError: x outside [0, 1].
    """
    if not 0 <= x <= 1:
        raise DomainError(f"binary entropy needs 0 <= x <= 1, got {x}")
    if x == 0 or x == 1:
        return 0.0
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


def _error_rate(non_correct: float, correct: float) -> float | None:
    total = correct + non_correct
    if total <= 0:
        return None
    # float residue can push the ratio a hair outside [0, 1]
    return min(1.0, max(0.0, non_correct / total))


def rate_from_probabilities(
    probs: ProbabilitySet, f_ec: float = 1.0, p_z_squared: float = 1.0
) -> RateBreakdown:
    """
    Assemble the rate from the five probabilities.

    R = p_Z^2 p_s p_BSM [1 - f h(e_Z) - h(e_X)] with p_s = 8 p_QND and
    p_BSM = 2 (p_c^Z + p_nc^Z) / p_QND^2. Negative brackets clamp to zero.

    Args:
        probs: The five post-selected probabilities.
        f_ec: Error-correction inefficiency.
        p_z_squared: Probability that both users pick the Z basis.
    """
    p_s = 8 * probs.p_qnd
    e_z = _error_rate(probs.p_nc_z, probs.p_c_z)
    e_x = _error_rate(probs.p_nc_x, probs.p_c_x)

    degenerate = probs.p_qnd <= 0 or e_z is None or e_x is None
    p_bsm = 2 * (probs.p_c_z + probs.p_nc_z) / probs.p_qnd**2 if probs.p_qnd > 0 else 0.0
    e_z = e_z if e_z is not None else 0.0
    e_x = e_x if e_x is not None else 0.0

    rate = 0.0
    if not degenerate:
        bracket = 1 - f_ec * binary_entropy(e_z) - binary_entropy(e_x)
        rate = max(0.0, p_z_squared * p_s * p_bsm * bracket)

    return RateBreakdown(
        **probs.as_dict(),
        p_s=p_s,
        p_bsm=p_bsm,
        e_z=e_z,
        e_x=e_x,
        rate=rate,
        degenerate=degenerate,
        error_rate_flag=e_z > 0.5 or e_x > 0.5,
    )


def secret_key_rate(
    ctx: SumContext,
    f_ec: float = 1.0,
    p_z_squared: float = 1.0,
    probabilities_fn: ProbabilityFn = compute_probabilities,
) -> RateBreakdown:
    """
    Secret bits per protocol use at one operating point.

    Degeneracies (no heralding, no BSM success) are reported through the
    breakdown's flags rather than raised.
    """
    with traced_operation(
        tracer, "secret_key_rate", {"eta_ch": ctx.eta_ch, "eta_det": ctx.eta_det}
    ) as span:
        breakdown = rate_from_probabilities(probabilities_fn(ctx), f_ec, p_z_squared)
        span.set_attribute("rate", breakdown.rate)
        if breakdown.degenerate:
            logger.debug("degenerate operating point", eta_ch=ctx.eta_ch, p_qnd=breakdown.p_qnd)
        return breakdown


# =============================================================================
# Bounds and Conditions
# =============================================================================


def plob_bound(eta_ch: float) -> float:
    """
    Repeaterless bound -log2(1 - eta^2).

    Raises:
        DomainError: eta_ch outside [0, 1).
    """
    if not 0 <= eta_ch < 1:
        raise DomainError(f"repeaterless bound needs 0 <= eta < 1, got {eta_ch}")
    return -math.log1p(-(eta_ch**2)) / math.log(2)


def necessary_q2_max(p1: float, q1: float) -> float:
    """Largest q_2 compatible with beating the bound: min(25 p1 q1^2 / 96, 1 - q1)."""
    return min(float(NECESSARY_Q2_COEFFICIENT) * p1 * q1**2, 1 - q1)


def necessary_condition_holds(roles: SourceRoles) -> bool:
    """Whether the QND statistics satisfy q_2 <= necessary_q2_max(p_1, q_1)."""
    q2_max = necessary_q2_max(roles.alice_bob.p(1), roles.qnd.p(1))
    return roles.qnd.p(2) <= q2_max + EPS_NORM


@trace_function("amdiqkd.rate.engine")
def pdc_condition_check(lam: float, mu: float) -> PdcConditionResult:
    """
    The necessary condition rewritten for PDC sources of brightness lam, mu.

    Raises:
        InvalidParameter: lam or mu not positive.
    """
    if lam <= 0 or mu <= 0:
        raise InvalidParameter(f"PDC brightness must be positive, got lambda={lam}, mu={mu}")
    lhs = lam / ((1 + lam) ** 3 * (1 + mu) ** 2)
    rhs = float(PDC_REQUIRED_THRESHOLD)
    return PdcConditionResult(lhs=lhs, rhs=rhs, satisfiable=lhs >= rhs)


# =============================================================================
# Distance Grids and Bound Comparison
# =============================================================================


def default_distance_grid(
    start_km: float = DEFAULT_L_START_KM,
    stop_km: float = DEFAULT_L_STOP_KM,
    points: int = DEFAULT_L_POINTS,
    spacing: str = DEFAULT_L_SPACING,
) -> list[float]:
    """
    Distances in km, log- or linearly spaced, endpoints included.

    Raises:
        InvalidParameter: Non-positive start, stop below start, no points or
            an unknown spacing.
    """
    if points < 1:
        raise InvalidParameter(f"distance grid needs at least one point, got {points}")
    if start_km <= 0 or stop_km < start_km:
        raise InvalidParameter(f"distance grid needs 0 < start <= stop, got {start_km}..{stop_km}")
    if spacing == "log":
        grid = np.geomspace(start_km, stop_km, points)
    elif spacing == "linear":
        grid = np.linspace(start_km, stop_km, points)
    else:
        raise InvalidParameter(f"unknown grid spacing '{spacing}'")
    return [float(L) for L in grid]


def _default_rate(ctx: SumContext) -> float:
    return secret_key_rate(ctx).rate


def beats_bound(
    roles: SourceRoles,
    params: SystemParams,
    L_grid: Sequence[float] | None = None,
    rate_fn: RateFn | None = None,
) -> BoundComparison:
    """
    Compare the rate with the repeaterless bound over a distance grid.

    Args:
        roles: Source statistics.
        params: System parameters; distance_km is replaced by each grid point.
        L_grid: Distances in km; defaults to default_distance_grid().
        rate_fn: Rate at a SumContext; defaults to the closed-form rate.

    Raises:
        InvalidParameter: Empty grid.
    """
    grid = list(L_grid) if L_grid is not None else default_distance_grid()
    if not grid:
        raise InvalidParameter("distance grid is empty")
    evaluate = rate_fn or _default_rate

    with traced_operation(tracer, "beats_bound", {"points": len(grid)}) as span:
        witness: float | None = None
        margin = -math.inf
        for L in grid:
            at_L = params.at_distance(L)
            eta_ch = channel_transmittance(at_L)
            difference = evaluate(sum_context(roles, at_L)) - plob_bound(eta_ch)
            margin = max(margin, difference)
            if difference > 0 and witness is None:
                witness = L
        span.set_attribute("margin", margin)

    return BoundComparison(beats=witness is not None, witness_L=witness, margin=margin)
