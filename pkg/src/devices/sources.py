"""
Entanglement source statistics.

Usage:
    from src.devices.sources import make_statistics, pdc_statistics

    epr = make_statistics([0.0, 1.0])
    pdc = pdc_statistics(0.1, n_max=2)
"""

import math
from collections.abc import Sequence

from src.core.constants import DEFAULT_N_MAX, EPS_NORM
from src.core.exceptions import InvalidParameter, NegativeProbability, NormalizationExceeded
from src.models.sources import PhotonStatistics


def make_statistics(probs: Sequence[float] | PhotonStatistics) -> PhotonStatistics:
    """
    Validate a photon-number distribution.

    A sum below one is accepted and recorded as a truncated tail. A single
    entry is padded with p_1 = 0 so that n_max >= 1.

    Args:
        probs: p_0..p_nmax, or an existing PhotonStatistics.

    Returns:
        Validated PhotonStatistics.

    Raises:
        InvalidParameter: Empty sequence or non-finite entry.
        NegativeProbability: Any entry below zero.
        NormalizationExceeded: Sum above 1 + EPS_NORM.
    """
    values = list(probs.probs if isinstance(probs, PhotonStatistics) else probs)
    if not values:
        raise InvalidParameter("photon statistics need at least one probability")

    for n, p in enumerate(values):
        if not math.isfinite(p):
            raise InvalidParameter(f"p_{n} is not finite")
        if p < 0:
            raise NegativeProbability(f"p_{n} = {p} is negative")

    total = math.fsum(values)
    if total > 1 + EPS_NORM:
        raise NormalizationExceeded(f"probabilities sum to {total!r} > 1")

    if len(values) == 1:
        values.append(0.0)

    return PhotonStatistics(
        probs=tuple(float(p) for p in values),
        truncated=total < 1 - EPS_NORM,
    )


def pdc_statistics(lam: float, n_max: int = DEFAULT_N_MAX) -> PhotonStatistics:
    """
    Type-II PDC pair statistics p_n = (n+1) λ^n / (1+λ)^(n+2), truncated at n_max.

    Args:
        lam: Pump parameter λ > 0.
        n_max: Truncation order (>= 1).

    Returns:
        PhotonStatistics flagged as a truncated tail.

    Raises:
        InvalidParameter: λ <= 0 or n_max < 1.
    """
    if not lam > 0:
        raise InvalidParameter(f"PDC pump parameter must be positive, got {lam}")
    if n_max < 1:
        raise InvalidParameter(f"n_max must be at least 1, got {n_max}")

    probs = tuple((n + 1) * lam**n / (1 + lam) ** (n + 2) for n in range(n_max + 1))
    return PhotonStatistics(probs=probs, truncated=True)


def tail_mass(stats: PhotonStatistics) -> float:
    """Probability mass discarded by truncation, 1 - sum(p_n)."""
    return 1.0 - math.fsum(stats.probs)


def statistics_from_ratios(zero: float, ratio: float) -> PhotonStatistics:
    """
    Build n_max = 2 statistics from the vacuum probability and p_2/p_1.

    p_1 = (1 - p_0)/(1 + P) and p_2 = P p_1; the same parameterization
    serves the QND sources with (q_0, Q).

    Raises:
        InvalidParameter: zero outside [0, 1) or negative ratio.
    """
    if not 0 <= zero < 1:
        raise InvalidParameter(f"vacuum probability must lie in [0, 1), got {zero}")
    if ratio < 0:
        raise InvalidParameter(f"quality ratio must be non-negative, got {ratio}")

    p1 = (1 - zero) / (1 + ratio)
    return make_statistics([zero, p1, ratio * p1])


def perfect_source() -> PhotonStatistics:
    """Ideal EPR source emitting exactly one pair."""
    return make_statistics([0.0, 1.0])


def vacuum_source() -> PhotonStatistics:
    """Source that never emits."""
    return make_statistics([1.0, 0.0])
