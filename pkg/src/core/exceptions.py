"""
Exception hierarchy for amdiqkd.

All domain errors derive from AmdiQkdError so the CLI can map them to exit codes
in one place.
"""


class AmdiQkdError(Exception):
    """Base error for the rate engine."""


# =============================================================================
# Parameter Errors
# =============================================================================


class InvalidParameter(AmdiQkdError):
    """A physical or numerical parameter is outside its admissible range."""


class NegativeProbability(InvalidParameter):
    """A photon-number probability is negative."""


class NormalizationExceeded(InvalidParameter):
    """Photon-number probabilities sum to more than one."""


class DomainError(AmdiQkdError):
    """Argument outside the mathematical domain of a function."""


class DegenerateDenominator(AmdiQkdError):
    """A closed-form expression has a non-positive denominator."""


# =============================================================================
# Oracle Errors
# =============================================================================


class UnknownMode(AmdiQkdError):
    """A mode label is not present in the operator's register."""


class CapExceeded(AmdiQkdError):
    """Photon numbers exceed what the Fock register can represent."""


# =============================================================================
# Configuration and Output Errors
# =============================================================================


class ParseError(AmdiQkdError):
    """Configuration document could not be parsed or validated."""

    def __init__(self, message: str, line: int | None = None, field: str | None = None) -> None:
        self.line = line
        self.field = field
        location = []
        if line is not None:
            location.append(f"line {line}")
        if field is not None:
            location.append(f"field '{field}'")
        prefix = f"{', '.join(location)}: " if location else ""
        super().__init__(f"{prefix}{message}")


class ConflictingSourceSpec(ParseError):
    """More than one specification style was given for the same source."""


class OutputError(AmdiQkdError):
    """Results could not be written."""
