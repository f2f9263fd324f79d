"""
Parser for parametric down-conversion sources.

    lambda = 0.1
    mu = 0.05
"""

from src.devices.sources import pdc_statistics
from src.models.sources import PhotonStatistics
from src.models.sweep import PdcSourceSpec, SourceSpec
from src.parsers.base_parser import BaseSourceParser, ConfigFields, SourceKeys


class PdcSourceParser(BaseSourceParser):
    """Brightness lambda (user sources) or mu (QND sources), truncated at n_max."""

    kind = "pdc"

    def keys(self, role: SourceKeys) -> tuple[str, ...]:
        return (role.brightness,)

    def validate(self, fields: ConfigFields, role: SourceKeys) -> tuple[bool, str, str | None]:
        error = self._check_number(fields, role.brightness)
        if error:
            return False, error, role.brightness
        if float(fields[role.brightness].value) <= 0:
            return False, "brightness must be positive", role.brightness
        return True, "", None

    def parse(self, fields: ConfigFields, role: SourceKeys) -> SourceSpec:
        return PdcSourceSpec(brightness=self._as_float(fields, role.brightness))

    def emit(self, spec: SourceSpec, role: SourceKeys) -> list[tuple[str, str]]:
        assert isinstance(spec, PdcSourceSpec)
        return [(role.brightness, repr(spec.brightness))]

    def to_statistics(self, spec: SourceSpec, n_max: int) -> PhotonStatistics:
        assert isinstance(spec, PdcSourceSpec)
        return pdc_statistics(spec.brightness, n_max=n_max)
