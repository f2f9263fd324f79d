"""
Source specification parsers.

Available parsers:
- RatioSourceParser: vacuum probability and quality ratio (p0, P / q0, Q)
- ExplicitSourceParser: explicit distribution (source / qnd_source)
- PdcSourceParser: PDC brightness (lambda / mu)

Usage:
    from src.parsers import USER_SOURCE_KEYS, get_parser_factory

    factory = get_parser_factory()
    result = factory.parse(fields, USER_SOURCE_KEYS)
    result.raise_for_error()
"""

from src.parsers.base_parser import (
    QND_SOURCE_KEYS,
    USER_SOURCE_KEYS,
    BaseSourceParser,
    ConfigField,
    ConfigFields,
    SourceKeys,
)
from src.parsers.explicit_parser import ExplicitSourceParser
from src.parsers.parser_factory import ParseResult, SourceParserFactory, get_parser_factory
from src.parsers.pdc_parser import PdcSourceParser
from src.parsers.ratio_parser import RatioSourceParser

__all__ = [
    # Base
    "BaseSourceParser",
    "ConfigField",
    "ConfigFields",
    "SourceKeys",
    "USER_SOURCE_KEYS",
    "QND_SOURCE_KEYS",
    # Parsers
    "RatioSourceParser",
    "ExplicitSourceParser",
    "PdcSourceParser",
    # Factory
    "SourceParserFactory",
    "ParseResult",
    "get_parser_factory",
]
