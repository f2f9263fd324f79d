"""
Evaluation contexts and rate results.

SumContext carries everything the closed-form sums need at one operating
point; ProbabilitySet and RateBreakdown carry their outputs.
"""

from pydantic import BaseModel, ConfigDict, Field

from src.models.sources import SourceRoles

# =============================================================================
# Evaluation Context
# =============================================================================


class SumContext(BaseModel):
    """Sources and efficiencies at a single operating point."""

    model_config = ConfigDict(frozen=True)

    roles: SourceRoles
    eta_ch: float = Field(..., ge=0, le=1, description="One-side channel transmittance")
    eta_det: float = Field(..., ge=0, le=1, description="QND and local detector efficiency")
    eta_det_bsm: float = Field(
        ..., ge=0, le=1, description="BSM detector efficiency including feedforward loss"
    )

    @property
    def n_max(self) -> int:
        """Truncation order of the sums."""
        return self.roles.n_max


# =============================================================================
# Probabilities and Rates
# =============================================================================

PROBABILITY_NAMES: tuple[str, ...] = ("p_qnd", "p_c_z", "p_nc_z", "p_c_x", "p_nc_x")


class ProbabilitySet(BaseModel):
    """The five post-selected probabilities the rate is built from."""

    model_config = ConfigDict(frozen=True)

    p_qnd: float = Field(..., description="QND heralding with a Z-basis local detection")
    p_c_z: float = Field(..., description="Correct Z-basis detection pattern")
    p_nc_z: float = Field(..., description="Non-correct Z-basis detection pattern")
    p_c_x: float = Field(..., description="Correct X-basis detection pattern")
    p_nc_x: float = Field(..., description="Non-correct X-basis detection pattern")

    def as_dict(self) -> dict[str, float]:
        """Probabilities keyed by name, in canonical order."""
        return {name: getattr(self, name) for name in PROBABILITY_NAMES}


class RateBreakdown(BaseModel):
    """Intermediate probabilities, error rates and the secret key rate."""

    model_config = ConfigDict(frozen=True)

    p_qnd: float
    p_c_z: float
    p_nc_z: float
    p_c_x: float
    p_nc_x: float
    p_s: float = Field(..., description="Probability of a heralded local Z outcome, 8 p_qnd")
    p_bsm: float = Field(..., description="Conditional BSM success probability")
    e_z: float = Field(..., description="Z-basis quantum bit error rate")
    e_x: float = Field(..., description="X-basis quantum bit error rate")
    rate: float = Field(..., ge=0, description="Secret bits per protocol use")
    degenerate: bool = Field(
        default=False, description="True when p_qnd or a basis denominator vanishes"
    )
    error_rate_flag: bool = Field(
        default=False, description="True when e_z or e_x exceeds 1/2 (flagged, not clamped)"
    )

    def probabilities(self) -> ProbabilitySet:
        """The five probabilities as a ProbabilitySet."""
        return ProbabilitySet(
            p_qnd=self.p_qnd,
            p_c_z=self.p_c_z,
            p_nc_z=self.p_nc_z,
            p_c_x=self.p_c_x,
            p_nc_x=self.p_nc_x,
        )


# =============================================================================
# Bound Comparisons
# =============================================================================


class BoundComparison(BaseModel):
    """Outcome of comparing the rate with the repeaterless bound over a grid."""

    model_config = ConfigDict(frozen=True)

    beats: bool
    witness_L: float | None = Field(default=None, description="First distance where rate > bound")
    margin: float = Field(..., description="max over the grid of rate - bound")


class QMaxResult(BaseModel):
    """Largest QND quality ratio Q that still beats the bound."""

    model_config = ConfigDict(frozen=True)

    q_max: float = Field(..., ge=0)
    beatable: bool = Field(..., description="False when even Q = 0 does not beat the bound")
    monotone: bool = Field(
        default=True, description="False when the pre-check forced the fine-scan fallback"
    )
    evaluations: int = Field(default=0, ge=0, description="Number of beats_bound evaluations")


class PdcConditionResult(BaseModel):
    """Necessary condition for PDC sources and whether it can hold."""

    model_config = ConfigDict(frozen=True)

    lhs: float
    rhs: float
    satisfiable: bool
