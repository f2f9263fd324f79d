"""
Photon-number statistics of entanglement sources.

A PhotonStatistics instance holds the truncated pair-number distribution
p_0..p_nmax of one source. SourceRoles pairs the statistics shared by the two
user sources with those shared by the two QND sources.
"""

import math

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.core.constants import EPS_NORM

# =============================================================================
# Photon Statistics
# =============================================================================


class PhotonStatistics(BaseModel):
    """
    Truncated photon-number-pair distribution of one source.

    Construct through src.devices.sources.make_statistics to get the
    domain exceptions; direct construction validates the same invariants
    and raises pydantic ValidationError.
    """

    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={
            "examples": [
                {"probs": [0.0, 1.0], "truncated": False},
                {"probs": [0.25, 0.25, 0.1875], "truncated": True},
            ]
        },
    )

    probs: tuple[float, ...] = Field(
        ...,
        min_length=2,
        description="Probabilities p_0..p_nmax of emitting n photon pairs",
    )
    truncated: bool = Field(
        default=False,
        description="True when the distribution is a sub-normalized truncated tail",
    )

    @model_validator(mode="after")
    def check_distribution(self) -> "PhotonStatistics":
        """Reject negative, non-finite or super-normalized distributions."""
        for n, p in enumerate(self.probs):
            if not math.isfinite(p):
                raise ValueError(f"p_{n} is not finite")
            if p < 0:
                raise ValueError(f"p_{n} = {p} is negative")
        total = math.fsum(self.probs)
        if total > 1 + EPS_NORM:
            raise ValueError(f"probabilities sum to {total} > 1")
        if total < 1 - EPS_NORM and not self.truncated:
            raise ValueError(f"probabilities sum to {total} < 1 without a truncated-tail flag")
        return self

    @property
    def n_max(self) -> int:
        """Truncation order."""
        return len(self.probs) - 1

    def p(self, n: int) -> float:
        """Probability of n pairs, zero beyond the truncation."""
        if 0 <= n < len(self.probs):
            return self.probs[n]
        return 0.0

    def support(self) -> list[int]:
        """Pair numbers with non-zero probability."""
        return [n for n, p in enumerate(self.probs) if p > 0]


class SourceRoles(BaseModel):
    """Statistics of the user sources (S_AC, S_BC) and the QND sources."""

    model_config = ConfigDict(frozen=True)

    alice_bob: PhotonStatistics = Field(..., description="Shared by Alice's and Bob's sources")
    qnd: PhotonStatistics = Field(..., description="Shared by both QND sources")

    @property
    def n_max(self) -> int:
        """Largest truncation order of the two roles."""
        return max(self.alice_bob.n_max, self.qnd.n_max)
