"""
Flat key-value configuration documents.

    # Q^max map over two P values
    mode = qmax
    eta_det = 0.9
    tau_ns = 67
    q0 = 0.2
    p0_values = 0.1
    P_values = 0.01, 0.25

One ``key = value`` per line, ``#`` starts a comment. Command-line flags are
passed as overrides and win over the document; a flag that describes a source
replaces every key the document uses for that source.
"""

from collections.abc import Callable, Mapping
from typing import Any

import structlog
from pydantic import ValidationError

from src.core.exceptions import ParseError
from src.core.telemetry import get_tracer, traced_operation
from src.models.sweep import SweepConfig
from src.parsers import (
    QND_SOURCE_KEYS,
    USER_SOURCE_KEYS,
    ConfigField,
    ConfigFields,
    SourceKeys,
    get_parser_factory,
)

logger = structlog.get_logger(__name__)
tracer = get_tracer("amdiqkd.sweep.config")

_SOURCE_ROLES: tuple[SourceKeys, ...] = (USER_SOURCE_KEYS, QND_SOURCE_KEYS)


def _float_list(raw: str) -> tuple[float, ...]:
    return tuple(float(entry) for entry in raw.split(",") if entry.strip())


# key -> (field path in SweepConfig, converter), in emission order
_SCALAR_KEYS: dict[str, tuple[tuple[str, ...], Callable[[str], Any]]] = {
    "mode": (("mode",), str),
    "L": (("distance_km",), float),
    "L_start": (("grid", "start"), float),
    "L_stop": (("grid", "stop"), float),
    "L_points": (("grid", "points"), int),
    "L_spacing": (("grid", "spacing"), str),
    "L_att": (("attenuation_length_km",), float),
    "c_fiber": (("c_fiber_m_per_s",), float),
    "eta_det": (("eta_det",), float),
    "tau_ns": (("tau_ns",), float),
    "n_max": (("n_max",), int),
    "p0_values": (("p0_values",), _float_list),
    "P_values": (("P_values",), _float_list),
    "qmax_tol": (("qmax_tol",), float),
    "points": (("points",), int),
    "seed": (("seed",), int),
    "abs_tol": (("abs_tol",), float),
    "rel_tol": (("rel_tol",), float),
    "threads": (("threads",), int),
    "out": (("out",), str),
    "json_out": (("json_out",), str),
}

_FIELD_TO_KEY: dict[tuple[str, ...], str] = {path: key for key, (path, _) in _SCALAR_KEYS.items()}


def _source_keys(role: SourceKeys) -> set[str]:
    return {role.zero, role.ratio, role.explicit, role.brightness}


# =============================================================================
# Parsing
# =============================================================================


def parse_config_fields(text: str) -> dict[str, ConfigField]:
    """
    Split a document into raw fields.

    Raises:
        ParseError: A line without '=', an empty key or a repeated key.
    """
    fields: dict[str, ConfigField] = {}
    for number, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"expected 'key = value', got '{line}'", line=number)
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ParseError("missing key before '='", line=number)
        if key in fields:
            raise ParseError(
                f"repeated key (first set on line {fields[key].line})", line=number, field=key
            )
        fields[key] = ConfigField(value=value, line=number)
    return fields


def _merge_overrides(fields: ConfigFields, overrides: Mapping[str, str]) -> dict[str, ConfigField]:
    merged = dict(fields)
    for role in _SOURCE_ROLES:
        role_keys = _source_keys(role)
        if role_keys & overrides.keys():
            for key in role_keys:
                merged.pop(key, None)
    for key, value in overrides.items():
        merged[key] = ConfigField(value=value, line=None)
    return merged


def _set_path(data: dict[str, Any], path: tuple[str, ...], value: Any) -> None:
    for part in path[:-1]:
        data = data.setdefault(part, {})
    data[path[-1]] = value


def _validation_error(error: ValidationError, fields: ConfigFields) -> ParseError:
    first = error.errors()[0]
    location = tuple(str(part) for part in first["loc"])
    key = _FIELD_TO_KEY.get(location)
    if key is None and location and location[0] in ("source", "qnd_source"):
        key = location[0]
    line = fields[key].line if key in fields else None
    return ParseError(first["msg"], line=line, field=key)


def build_config(fields: ConfigFields, overrides: Mapping[str, str] | None = None) -> SweepConfig:
    """
    Validate raw fields (plus flag overrides) into a SweepConfig.

    Raises:
        ParseError: Unknown key, unconvertible value or invalid value.
        ConflictingSourceSpec: More than one style for the same source.
    """
    merged = _merge_overrides(fields, overrides or {})
    source_keys = set().union(*(_source_keys(role) for role in _SOURCE_ROLES))

    data: dict[str, Any] = {}
    for key, item in merged.items():
        if key in source_keys:
            continue
        if key not in _SCALAR_KEYS:
            raise ParseError("unknown key", line=item.line, field=key)
        path, convert = _SCALAR_KEYS[key]
        try:
            _set_path(data, path, convert(item.value))
        except ValueError:
            raise ParseError(f"invalid value '{item.value}'", line=item.line, field=key) from None

    factory = get_parser_factory()
    for role in _SOURCE_ROLES:
        result = factory.parse(merged, role)
        result.raise_for_error()
        if result.spec is not None:
            data[role.role] = result.spec.model_dump()

    try:
        return SweepConfig.model_validate(data)
    except ValidationError as e:
        raise _validation_error(e, merged) from None


def parse_config(text: str, overrides: Mapping[str, str] | None = None) -> SweepConfig:
    """
    Parse a configuration document.

    Args:
        text: The key-value document.
        overrides: Flag values keyed like the document; they take precedence.

    Raises:
        ParseError: With line and field diagnostics.
        ConflictingSourceSpec: More than one style for the same source.
    """
    with traced_operation(tracer, "parse_config", {"lines": text.count("\n") + 1}) as span:
        cfg = build_config(parse_config_fields(text), overrides)
        span.set_attribute("mode", cfg.mode)
        logger.debug("configuration parsed", mode=cfg.mode)
        return cfg


# =============================================================================
# Emission
# =============================================================================


def _format_value(value: Any) -> str:
    if isinstance(value, tuple):
        return ", ".join(repr(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def emit_config(cfg: SweepConfig) -> str:
    """Write cfg as a document that parse_config reads back to an equal config."""
    dumped = cfg.model_dump()
    lines = []
    for key, (path, _) in _SCALAR_KEYS.items():
        value: Any = dumped
        for part in path:
            value = value[part]
        if value is None:
            continue
        if isinstance(value, list):
            value = tuple(value)
        if value == () and key in ("p0_values", "P_values"):
            continue
        lines.append(f"{key} = {_format_value(value)}")

    factory = get_parser_factory()
    lines.extend(f"{key} = {value}" for key, value in factory.emit(cfg.source, USER_SOURCE_KEYS))
    lines.extend(f"{key} = {value}" for key, value in factory.emit(cfg.qnd_source, QND_SOURCE_KEYS))
    return "\n".join(lines) + "\n"
