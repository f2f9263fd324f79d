"""
Search for the largest QND quality ratio Q = q_2/q_1 that still beats the bound.

The bound margin is assumed non-increasing in Q. A coarse scan checks that
assumption on every call; when it holds, the crossing is refined with
scipy's brentq inside the bracketing cell, otherwise a fine scan is used.
"""

from collections.abc import Sequence

import numpy as np
import structlog
from scipy.optimize import brentq

from src.core.constants import (
    DEFAULT_QMAX_TOLERANCE,
    NECESSARY_Q2_COEFFICIENT,
    QMAX_FALLBACK_FACTOR,
    QMAX_PRECHECK_POINTS,
)
from src.core.exceptions import InvalidParameter
from src.core.telemetry import get_tracer, traced_operation
from src.devices.sources import statistics_from_ratios
from src.models.rate import QMaxResult
from src.models.sources import SourceRoles
from src.models.system import SystemParams
from src.rate.engine import RateFn, beats_bound, default_distance_grid

logger = structlog.get_logger(__name__)
tracer = get_tracer("amdiqkd.rate.qmax")

# Doublings allowed when the analytic upper bracket still beats the bound
_MAX_BRACKET_EXPANSIONS = 20


class _MarginCache:
    """Memoized bound margin as a function of Q."""

    def __init__(
        self,
        p0: float,
        P: float,
        q0: float,
        params: SystemParams,
        L_grid: Sequence[float],
        rate_fn: RateFn | None,
    ) -> None:
        self.alice_bob = statistics_from_ratios(p0, P)
        self.q0 = q0
        self.params = params
        self.L_grid = list(L_grid)
        self.rate_fn = rate_fn
        self._values: dict[float, float] = {}

    @property
    def evaluations(self) -> int:
        return len(self._values)

    def __call__(self, Q: float) -> float:
        Q = float(Q)
        if Q not in self._values:
            roles = SourceRoles(alice_bob=self.alice_bob, qnd=statistics_from_ratios(self.q0, Q))
            self._values[Q] = beats_bound(roles, self.params, self.L_grid, self.rate_fn).margin
        return self._values[Q]

    def beats(self, Q: float) -> bool:
        return self(Q) > 0


def _upper_bracket(margin: _MarginCache, p1: float, q0: float) -> float:
    # q2 <= 25 p1 q1^2 / 96 with q1 <= 1 - q0 bounds Q from above at unit efficiency
    Q_hi = float(NECESSARY_Q2_COEFFICIENT) * p1 * (1 - q0)
    for _ in range(_MAX_BRACKET_EXPANSIONS):
        if not margin.beats(Q_hi):
            return Q_hi
        Q_hi *= 2
    raise InvalidParameter(f"no Q below {Q_hi} fails to beat the bound")


def q_max_search(
    p0: float,
    P: float,
    q0: float,
    params: SystemParams,
    L_grid: Sequence[float] | None = None,
    tol: float = DEFAULT_QMAX_TOLERANCE,
    rate_fn: RateFn | None = None,
) -> QMaxResult:
    """
    Largest Q for which beats_bound holds, to absolute tolerance tol.

    Args:
        p0, P: Vacuum probability and p_2/p_1 of the user sources.
        q0: Vacuum probability of the QND sources.
        params: Detector and feedforward parameters (distance is scanned).
        L_grid: Distances in km; defaults to default_distance_grid().
        tol: Absolute tolerance on Q.
        rate_fn: Optional rate override passed to beats_bound.

    Returns:
        QMaxResult; beatable is False (q_max = 0) when even Q = 0 fails.

    Raises:
        InvalidParameter: Infeasible (p0, P) or q0.
    """
    if not 0 <= q0 < 1:
        raise InvalidParameter(f"q0 must lie in [0, 1), got {q0}")
    if tol <= 0:
        raise InvalidParameter(f"tolerance must be positive, got {tol}")
    grid = list(L_grid) if L_grid is not None else default_distance_grid()
    margin = _MarginCache(p0, P, q0, params, grid, rate_fn)

    with traced_operation(
        tracer, "q_max_search", {"p0": p0, "P": P, "q0": q0, "eta_det": params.eta_det}
    ) as span:
        if not margin.beats(0.0):
            logger.debug("bound not beatable at Q=0", p0=p0, P=P, q0=q0)
            return QMaxResult(q_max=0.0, beatable=False, evaluations=margin.evaluations)

        Q_hi = _upper_bracket(margin, margin.alice_bob.p(1), q0)
        samples = np.linspace(0.0, Q_hi, QMAX_PRECHECK_POINTS)
        flags = [margin.beats(Q) for Q in samples]
        first_fail = flags.index(False)
        monotone = not any(flags[first_fail:])

        if monotone:
            lower, upper = float(samples[first_fail - 1]), float(samples[first_fail])
            q_max = float(brentq(margin, lower, upper, xtol=tol))
            # the root may sit a hair above the last beating Q
            if not margin.beats(q_max):
                q_max = max(lower, q_max - tol)
        else:
            logger.warning(
                "bound margin not monotone in Q, falling back to fine scan",
                p0=p0,
                P=P,
                q0=q0,
            )
            fine = np.linspace(0.0, Q_hi, QMAX_PRECHECK_POINTS * QMAX_FALLBACK_FACTOR)
            q_max = max(float(Q) for Q in fine if margin.beats(Q))

        span.set_attribute("q_max", q_max)
        span.set_attribute("evaluations", margin.evaluations)

    return QMaxResult(
        q_max=q_max, beatable=True, monotone=monotone, evaluations=margin.evaluations
    )


def q_max_ratio(
    p0: float,
    P: float,
    q0: float,
    params: SystemParams,
    L_grid: Sequence[float] | None = None,
    tol: float = DEFAULT_QMAX_TOLERANCE,
) -> float:
    """
    Q^max at (eta_det, tau) relative to Q^max with ideal detectors and no feedforward.

    Zero when the ideal configuration cannot beat the bound.
    """
    ideal = params.model_copy(update={"eta_det": 1.0, "tau_s": 0.0})
    reference = q_max_search(p0, P, q0, ideal, L_grid, tol)
    if reference.q_max <= 0:
        return 0.0
    return q_max_search(p0, P, q0, params, L_grid, tol).q_max / reference.q_max
