"""Core functionality for amdiqkd."""

from src.core.config import Settings, get_settings
from src.core.exceptions import (
    AmdiQkdError,
    CapExceeded,
    ConflictingSourceSpec,
    DegenerateDenominator,
    DomainError,
    InvalidParameter,
    NegativeProbability,
    NormalizationExceeded,
    OutputError,
    ParseError,
    UnknownMode,
)
from src.core.telemetry import (
    get_tracer,
    setup_logging,
    setup_telemetry,
    trace_function,
    traced_operation,
)

__all__ = [
    # Config
    "Settings",
    "get_settings",
    # Telemetry
    "setup_logging",
    "setup_telemetry",
    "get_tracer",
    "traced_operation",
    "trace_function",
    # Exceptions
    "AmdiQkdError",
    "InvalidParameter",
    "NegativeProbability",
    "NormalizationExceeded",
    "DomainError",
    "DegenerateDenominator",
    "UnknownMode",
    "CapExceeded",
    "ParseError",
    "ConflictingSourceSpec",
    "OutputError",
]
