"""
Sweep configuration and result rows.

A SweepConfig is what parse_config produces from a flat key-value document
(and what emit_config writes back). Source specifications come in three
styles, discriminated by ``kind``.
"""

from typing import Annotated, Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.core.constants import (
    DEFAULT_ATTENUATION_LENGTH_KM,
    DEFAULT_C_FIBER_M_PER_S,
    DEFAULT_ETA_DET,
    DEFAULT_L_POINTS,
    DEFAULT_L_START_KM,
    DEFAULT_L_STOP_KM,
    DEFAULT_N_MAX,
    DEFAULT_QMAX_TOLERANCE,
    DEFAULT_TAU_NS,
)
from src.models.system import SystemParams

# Type aliases
SweepMode = Literal["rate", "sweep", "qmax", "verify", "check-pdc"]
GridSpacing = Literal["log", "linear"]


# =============================================================================
# Source Specifications
# =============================================================================


class RatioSourceSpec(BaseModel):
    """Vacuum probability and quality ratio (p_0, P) or (q_0, Q)."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["ratios"] = "ratios"
    zero: float = Field(default=0.0, ge=0, lt=1, description="Vacuum probability")
    ratio: float = Field(default=0.0, ge=0, description="Two-pair over one-pair probability")


class ExplicitSourceSpec(BaseModel):
    """Explicit truncated distribution p_0..p_nmax."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["explicit"] = "explicit"
    probs: tuple[float, ...] = Field(..., min_length=1)


class PdcSourceSpec(BaseModel):
    """Parametric down-conversion source of brightness lambda (or mu)."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["pdc"] = "pdc"
    brightness: float = Field(..., gt=0)


SourceSpec = Annotated[
    RatioSourceSpec | ExplicitSourceSpec | PdcSourceSpec, Field(discriminator="kind")
]


# =============================================================================
# Sweep Configuration
# =============================================================================


class DistanceGrid(BaseModel):
    """Alice-Bob distances to sweep, in km."""

    model_config = ConfigDict(frozen=True)

    start: float = Field(default=DEFAULT_L_START_KM, gt=0)
    stop: float = Field(default=DEFAULT_L_STOP_KM, gt=0)
    points: int = Field(default=DEFAULT_L_POINTS, ge=1)
    spacing: GridSpacing = "log"

    @model_validator(mode="after")
    def check_range(self) -> "DistanceGrid":
        """A grid runs upward from start to stop."""
        if self.stop < self.start:
            raise ValueError(f"stop ({self.stop}) must not be below start ({self.start})")
        return self


class SweepConfig(BaseModel):
    """Validated run configuration for every CLI mode."""

    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={
            "examples": [
                {
                    "mode": "qmax",
                    "eta_det": 0.9,
                    "tau_ns": 67.0,
                    "qnd_source": {"kind": "ratios", "zero": 0.2, "ratio": 0.0},
                    "p0_values": [0.1],
                    "P_values": [0.01, 0.25],
                }
            ]
        },
    )

    mode: SweepMode = "rate"

    # Sources
    source: SourceSpec = Field(default_factory=RatioSourceSpec)
    qnd_source: SourceSpec = Field(default_factory=RatioSourceSpec)
    n_max: int = Field(default=DEFAULT_N_MAX, ge=1, description="Truncation for PDC sources")

    # System
    distance_km: float = Field(default=100.0, ge=0, description="Distance for mode=rate")
    attenuation_length_km: float = Field(default=DEFAULT_ATTENUATION_LENGTH_KM, gt=0)
    c_fiber_m_per_s: float = Field(default=DEFAULT_C_FIBER_M_PER_S, gt=0)
    eta_det: float = Field(default=DEFAULT_ETA_DET, ge=0, le=1)
    tau_ns: float = Field(default=DEFAULT_TAU_NS, ge=0)
    grid: DistanceGrid = Field(default_factory=DistanceGrid)

    # Q^max grid
    p0_values: tuple[float, ...] = Field(default=(), description="User vacuum probabilities")
    P_values: tuple[float, ...] = Field(default=(), description="User quality ratios")
    qmax_tol: float = Field(default=DEFAULT_QMAX_TOLERANCE, gt=0)

    # Verification
    points: int | None = Field(default=None, ge=1)
    seed: int | None = None
    abs_tol: float | None = Field(default=None, gt=0)
    rel_tol: float | None = Field(default=None, gt=0)

    # Execution and output
    threads: int | None = Field(default=None, ge=1)
    out: str | None = None
    json_out: str | None = None

    @model_validator(mode="after")
    def check_mode_requirements(self) -> "SweepConfig":
        """Mode-specific source requirements."""
        if self.mode == "check-pdc" and not (
            isinstance(self.source, PdcSourceSpec) and isinstance(self.qnd_source, PdcSourceSpec)
        ):
            raise ValueError("check-pdc needs lambda and mu")
        if self.mode == "qmax":
            if not isinstance(self.qnd_source, RatioSourceSpec):
                raise ValueError("qmax needs the QND source given as q0")
            if not self.p0_values and not isinstance(self.source, RatioSourceSpec):
                raise ValueError("qmax needs p0/P values for the user sources")
        return self

    @property
    def tau_s(self) -> float:
        """Feedforward time in seconds."""
        return self.tau_ns * 1e-9

    def system_params(self, distance_km: float | None = None) -> SystemParams:
        """SystemParams at distance_km (default: the configured distance)."""
        return SystemParams(
            distance_km=self.distance_km if distance_km is None else distance_km,
            attenuation_length_km=self.attenuation_length_km,
            eta_det=self.eta_det,
            tau_s=self.tau_s,
            c_fiber_m_per_s=self.c_fiber_m_per_s,
        )

    def qmax_cells(self) -> list[tuple[float, float]]:
        """(p0, P) pairs of the Q^max grid in row-major order."""
        fallback = self.source if isinstance(self.source, RatioSourceSpec) else RatioSourceSpec()
        p0_values = self.p0_values or (fallback.zero,)
        P_values = self.P_values or (fallback.ratio,)
        return [(p0, P) for p0 in p0_values for P in P_values]


# =============================================================================
# Result Rows
# =============================================================================

SWEEP_COLUMNS: tuple[str, ...] = (
    "L_km",
    "eta_ch",
    "p_qnd",
    "p_c_z",
    "p_nc_z",
    "p_c_x",
    "p_nc_x",
    "e_z",
    "e_x",
    "rate",
    "plob_bound",
    "beats_bound",
)

QMAX_COLUMNS: tuple[str, ...] = (
    "p0",
    "P",
    "q0",
    "eta_det",
    "tau_ns",
    "q_max",
    "q_max_reference",
    "ratio",
    "beatable",
    "monotone",
)


class SweepRow(BaseModel):
    """One distance of a rate sweep."""

    model_config = ConfigDict(frozen=True)

    L_km: float
    eta_ch: float
    p_qnd: float
    p_c_z: float
    p_nc_z: float
    p_c_x: float
    p_nc_x: float
    e_z: float
    e_x: float
    rate: float
    plob_bound: float
    beats_bound: bool


class QMaxRow(BaseModel):
    """One (p0, P) cell of a Q^max map."""

    model_config = ConfigDict(frozen=True)

    p0: float
    P: float
    q0: float
    eta_det: float
    tau_ns: float
    q_max: float = Field(..., description="Q^max at the configured eta_det and tau")
    q_max_reference: float = Field(..., description="Q^max with eta_det = 1 and tau = 0")
    ratio: float = Field(..., description="q_max / q_max_reference, zero when undefined")
    beatable: bool
    monotone: bool
