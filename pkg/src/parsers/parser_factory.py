"""
Parser factory for source specifications.

Selects the parser whose keys appear in the document for a given source
role. Exactly one style may be used per role.
"""

from dataclasses import dataclass

from src.core.exceptions import ConflictingSourceSpec, ParseError
from src.core.telemetry import get_tracer, traced_operation
from src.models.sources import PhotonStatistics
from src.models.sweep import SourceSpec
from src.parsers.base_parser import BaseSourceParser, ConfigFields, SourceKeys
from src.parsers.explicit_parser import ExplicitSourceParser
from src.parsers.pdc_parser import PdcSourceParser
from src.parsers.ratio_parser import RatioSourceParser

tracer = get_tracer("amdiqkd.parsers.factory")


# =============================================================================
# Result Types
# =============================================================================


@dataclass
class ParseResult:
    """Result of parsing one source role."""

    success: bool
    spec: SourceSpec | None = None
    error: str = ""
    parser_used: str = ""
    line: int | None = None
    field: str | None = None

    def __bool__(self) -> bool:
        """Allow using result in boolean context."""
        return self.success

    def raise_for_error(self) -> None:
        """Turn a failed result into a ParseError."""
        if not self.success:
            raise ParseError(self.error, line=self.line, field=self.field)


# =============================================================================
# Parser Factory
# =============================================================================


class SourceParserFactory:
    """
    Strategy selection over the source specification styles.

    Example:
        >>> factory = SourceParserFactory()
        >>> result = factory.parse(fields, USER_SOURCE_KEYS)
        >>> if result:
        ...     stats = factory.to_statistics(result.spec, n_max=2)
    """

    def __init__(self) -> None:
        """Initialize with the ratio, explicit and PDC parsers."""
        self.parsers: list[BaseSourceParser] = [
            RatioSourceParser(),
            ExplicitSourceParser(),
            PdcSourceParser(),
        ]

    def matching_parsers(self, fields: ConfigFields, role: SourceKeys) -> list[BaseSourceParser]:
        """Parsers whose keys appear in fields for this role."""
        return [parser for parser in self.parsers if parser.can_parse(fields, role)]

    def parse(self, fields: ConfigFields, role: SourceKeys) -> ParseResult:
        """
        Parse the specification of one source role.

        Returns:
            ParseResult; success with spec None when the role is not described.

        Raises:
            ConflictingSourceSpec: Keys of more than one style are present.
        """
        with traced_operation(tracer, "parse_source_spec", {"role": role.role}) as span:
            matching = self.matching_parsers(fields, role)

            if len(matching) > 1:
                keys = [key for parser in matching for key in parser.keys(role) if key in fields]
                lines = [fields[key].line for key in keys if fields[key].line is not None]
                raise ConflictingSourceSpec(
                    f"{role.role} given in more than one style ({', '.join(keys)})",
                    line=max(lines) if lines else None,
                    field=role.role,
                )

            if not matching:
                span.set_attribute("parser.found", False)
                return ParseResult(success=True)

            parser = matching[0]
            parser_name = parser.__class__.__name__
            span.set_attribute("parser.name", parser_name)

            is_valid, error, key = parser.validate(fields, role)
            if not is_valid:
                span.set_attribute("validation.passed", False)
                return ParseResult(
                    success=False,
                    error=error,
                    parser_used=parser_name,
                    line=fields[key].line if key in fields else None,
                    field=key,
                )

            return ParseResult(
                success=True,
                spec=parser.parse(fields, role),
                parser_used=parser_name,
            )

    def parser_for(self, spec: SourceSpec) -> BaseSourceParser:
        """The parser owning spec's style."""
        for parser in self.parsers:
            if parser.kind == spec.kind:
                return parser
        raise ParseError(f"no parser for source kind '{spec.kind}'")

    def emit(self, spec: SourceSpec, role: SourceKeys) -> list[tuple[str, str]]:
        """Key-value pairs describing spec for this role."""
        return self.parser_for(spec).emit(spec, role)

    def to_statistics(self, spec: SourceSpec, n_max: int) -> PhotonStatistics:
        """Photon statistics described by spec."""
        return self.parser_for(spec).to_statistics(spec, n_max)

    def register_parser(self, parser: BaseSourceParser) -> None:
        """Register an additional style."""
        self.parsers.append(parser)

    def list_parsers(self) -> list[str]:
        """Names of the registered parsers."""
        return [p.__class__.__name__ for p in self.parsers]


# =============================================================================
# Global Factory Instance (Singleton)
# =============================================================================

_parser_factory: SourceParserFactory | None = None


def get_parser_factory() -> SourceParserFactory:
    """Get the global parser factory instance."""
    global _parser_factory

    if _parser_factory is None:
        _parser_factory = SourceParserFactory()

    return _parser_factory
