"""
CSV and JSON result writers.

Floats are written with 17 significant digits so every double round-trips;
booleans as ``true``/``false``. A path of ``-`` writes to stdout.
"""

import csv
import io
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from pydantic import BaseModel, TypeAdapter

from src.core.constants import CSV_FLOAT_FORMAT
from src.core.exceptions import OutputError

_ROWS_ADAPTER: TypeAdapter[list[Any]] = TypeAdapter(list[Any])


def _format_cell(value: object) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, CSV_FLOAT_FORMAT)
    return str(value)


def render_csv(rows: Sequence[BaseModel], columns: Sequence[str]) -> str:
    """CSV text with a header row and RFC 4180 quoting."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\r\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow(_format_cell(getattr(row, column)) for column in columns)
    return buffer.getvalue()


def render_json(rows: Sequence[BaseModel]) -> str:
    """JSON array of the rows."""
    return _ROWS_ADAPTER.dump_json(list(rows), indent=2).decode() + "\n"


def _write_text(text: str, path: str | Path) -> None:
    if str(path) == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    except OSError as e:
        raise OutputError(f"cannot write {path}: {e}") from e


def write_csv(rows: Sequence[BaseModel], columns: Sequence[str], path: str | Path) -> None:
    """
    Write rows as CSV.

    Raises:
        OutputError: The file cannot be written.
    """
    _write_text(render_csv(rows, columns), path)


def write_json(rows: Sequence[BaseModel], path: str | Path) -> None:
    """
    Write rows as a JSON array.

    Raises:
        OutputError: The file cannot be written.
    """
    _write_text(render_json(rows), path)
