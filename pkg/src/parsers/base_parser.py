"""
Base parser for source specifications.

A configuration document can describe each source role (user sources or
QND sources) in one of several styles. Each style has its own parser that
recognizes its keys, validates them and builds the matching SourceSpec.
"""

from abc import ABC, abstractmethod
from collections.abc import Mapping
from dataclasses import dataclass

from src.core.exceptions import ParseError
from src.models.sources import PhotonStatistics
from src.models.sweep import SourceSpec

# =============================================================================
# Config Fields and Role Keys
# =============================================================================


@dataclass(frozen=True)
class ConfigField:
    """Raw value of one key and the line it came from."""

    value: str
    line: int | None = None


ConfigFields = Mapping[str, ConfigField]


@dataclass(frozen=True)
class SourceKeys:
    """Configuration keys describing one source role."""

    role: str
    zero: str
    ratio: str
    explicit: str
    brightness: str


USER_SOURCE_KEYS = SourceKeys(
    role="source", zero="p0", ratio="P", explicit="source", brightness="lambda"
)
QND_SOURCE_KEYS = SourceKeys(
    role="qnd_source", zero="q0", ratio="Q", explicit="qnd_source", brightness="mu"
)


# =============================================================================
# Base Parser
# =============================================================================


class BaseSourceParser(ABC):
    """
    Abstract base for source specification parsers.

    Subclasses must implement:
        - keys(): Configuration keys belonging to the style
        - validate(): Check the raw values
        - parse(): Build the SourceSpec
        - emit(): Write a SourceSpec back as key-value pairs
        - to_statistics(): Turn the SourceSpec into photon statistics
    """

    kind: str = ""

    @abstractmethod
    def keys(self, role: SourceKeys) -> tuple[str, ...]:
        """Keys this style uses for the given role."""

    def can_parse(self, fields: ConfigFields, role: SourceKeys) -> bool:
        """True if any of the style's keys is present."""
        return any(key in fields for key in self.keys(role))

    @abstractmethod
    def validate(self, fields: ConfigFields, role: SourceKeys) -> tuple[bool, str, str | None]:
        """
        Validate the style's fields before parsing.

        Returns:
            Tuple of (is_valid, error_message, offending_key).
        """

    @abstractmethod
    def parse(self, fields: ConfigFields, role: SourceKeys) -> SourceSpec:
        """Build the SourceSpec from validated fields."""

    @abstractmethod
    def emit(self, spec: SourceSpec, role: SourceKeys) -> list[tuple[str, str]]:
        """Key-value pairs that parse back to spec."""

    @abstractmethod
    def to_statistics(self, spec: SourceSpec, n_max: int) -> PhotonStatistics:
        """Photon statistics described by spec."""

    # -------------------------------------------------------------------------
    # Helpers
    # -------------------------------------------------------------------------

    @staticmethod
    def _as_float(fields: ConfigFields, key: str) -> float:
        item = fields[key]
        try:
            return float(item.value)
        except ValueError:
            raise ParseError(f"'{item.value}' is not a number", line=item.line, field=key) from None

    @staticmethod
    def _check_number(fields: ConfigFields, key: str) -> str:
        if key not in fields:
            return ""
        try:
            float(fields[key].value)
        except ValueError:
            return f"'{fields[key].value}' is not a number"
        return ""
