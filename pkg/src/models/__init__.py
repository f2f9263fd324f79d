"""
amdiqkd data models.

- Source models: PhotonStatistics, SourceRoles
- System models: SystemParams
- Rate models: SumContext, ProbabilitySet, RateBreakdown and bound comparisons
- Sweep models: source specifications, SweepConfig and result rows
"""

from src.models.rate import (
    PROBABILITY_NAMES,
    BoundComparison,
    PdcConditionResult,
    ProbabilitySet,
    QMaxResult,
    RateBreakdown,
    SumContext,
)
from src.models.sources import PhotonStatistics, SourceRoles
from src.models.sweep import (
    QMAX_COLUMNS,
    SWEEP_COLUMNS,
    DistanceGrid,
    ExplicitSourceSpec,
    GridSpacing,
    PdcSourceSpec,
    QMaxRow,
    RatioSourceSpec,
    SourceSpec,
    SweepConfig,
    SweepMode,
    SweepRow,
)
from src.models.system import SystemParams

__all__ = [
    # Sources
    "PhotonStatistics",
    "SourceRoles",
    # System
    "SystemParams",
    # Rate
    "PROBABILITY_NAMES",
    "SumContext",
    "ProbabilitySet",
    "RateBreakdown",
    "BoundComparison",
    "QMaxResult",
    "PdcConditionResult",
    # Sweep
    "SweepMode",
    "GridSpacing",
    "RatioSourceSpec",
    "ExplicitSourceSpec",
    "PdcSourceSpec",
    "SourceSpec",
    "DistanceGrid",
    "SweepConfig",
    "SweepRow",
    "QMaxRow",
    "SWEEP_COLUMNS",
    "QMAX_COLUMNS",
]
