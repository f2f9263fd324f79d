"""
Parser for sources given by vacuum probability and quality ratio.

    p0 = 0.1
    P = 0.25
"""

from src.devices.sources import statistics_from_ratios
from src.models.sources import PhotonStatistics
from src.models.sweep import RatioSourceSpec, SourceSpec
from src.parsers.base_parser import BaseSourceParser, ConfigFields, SourceKeys


class RatioSourceParser(BaseSourceParser):
    """(p0, P) for the user sources, (q0, Q) for the QND sources; missing keys default to 0."""

    kind = "ratios"

    def keys(self, role: SourceKeys) -> tuple[str, ...]:
        return (role.zero, role.ratio)

    def validate(self, fields: ConfigFields, role: SourceKeys) -> tuple[bool, str, str | None]:
        for key in self.keys(role):
            error = self._check_number(fields, key)
            if error:
                return False, error, key
        if role.zero in fields and not 0 <= float(fields[role.zero].value) < 1:
            return False, "vacuum probability must lie in [0, 1)", role.zero
        if role.ratio in fields and float(fields[role.ratio].value) < 0:
            return False, "quality ratio must be non-negative", role.ratio
        return True, "", None

    def parse(self, fields: ConfigFields, role: SourceKeys) -> SourceSpec:
        zero = self._as_float(fields, role.zero) if role.zero in fields else 0.0
        ratio = self._as_float(fields, role.ratio) if role.ratio in fields else 0.0
        return RatioSourceSpec(zero=zero, ratio=ratio)

    def emit(self, spec: SourceSpec, role: SourceKeys) -> list[tuple[str, str]]:
        assert isinstance(spec, RatioSourceSpec)
        return [(role.zero, repr(spec.zero)), (role.ratio, repr(spec.ratio))]

    def to_statistics(self, spec: SourceSpec, n_max: int) -> PhotonStatistics:
        assert isinstance(spec, RatioSourceSpec)
        return statistics_from_ratios(spec.zero, spec.ratio)
