"""
Parser for sources given as an explicit distribution.

    source = 0.1, 0.8, 0.1
"""

from src.devices.sources import make_statistics
from src.models.sources import PhotonStatistics
from src.models.sweep import ExplicitSourceSpec, SourceSpec
from src.parsers.base_parser import BaseSourceParser, ConfigFields, SourceKeys


class ExplicitSourceParser(BaseSourceParser):
    """Comma-separated p_0..p_nmax."""

    kind = "explicit"

    def keys(self, role: SourceKeys) -> tuple[str, ...]:
        return (role.explicit,)

    def validate(self, fields: ConfigFields, role: SourceKeys) -> tuple[bool, str, str | None]:
        raw = fields[role.explicit].value
        entries = [entry.strip() for entry in raw.split(",")]
        if not any(entries):
            return False, "probability list is empty", role.explicit
        for entry in entries:
            try:
                value = float(entry)
            except ValueError:
                return False, f"'{entry}' is not a number", role.explicit
            if value < 0:
                return False, f"probability {entry} is negative", role.explicit
        return True, "", None

    def parse(self, fields: ConfigFields, role: SourceKeys) -> SourceSpec:
        raw = fields[role.explicit].value
        return ExplicitSourceSpec(probs=tuple(float(entry) for entry in raw.split(",")))

    def emit(self, spec: SourceSpec, role: SourceKeys) -> list[tuple[str, str]]:
        assert isinstance(spec, ExplicitSourceSpec)
        return [(role.explicit, ", ".join(repr(p) for p in spec.probs))]

    def to_statistics(self, spec: SourceSpec, n_max: int) -> PhotonStatistics:
        assert isinstance(spec, ExplicitSourceSpec)
        return make_statistics(spec.probs)
