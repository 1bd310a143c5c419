"""Reading numeric data files: one value per line, or a CSV column."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = ["IngestError", "Ingested", "read_values"]


class IngestError(ValueError):
    """Malformed content; carries the offending 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message)
        self.line = line


@dataclass(frozen=True)
class Ingested:
    values: np.ndarray
    skipped: int = 0


def _parse(token: str) -> float:
    # float() accepts locale-free decimal points only, plus inf/nan which we reject.
    v = float(token.strip())
    if v != v or v in (float("inf"), float("-inf")):
        raise ValueError(token)
    return v


def _column_index(header: list[str], column: str) -> int:
    names = [h.strip() for h in header]
    if column in names:
        return names.index(column)
    raise IngestError(f"column {column!r} not found in header {names}", 1)


def read_values(path: str | Path, column: str | int | None = None,
                lenient: bool = False) -> Ingested:
    """Read numbers from ``path``.

    Plain files hold one number per line.  CSV is used when ``column`` is given
    or the file ends in ``.csv``; ``column`` is a header name or a 0-based index
    (default 0).  Blank lines are ignored.  A malformed value raises
    :class:`IngestError` naming its line, unless ``lenient`` is set, in which
    case it is skipped and counted.

    Raises OSError when the file cannot be read.
    """
    p = Path(path)
    text = p.read_text()
    use_csv = column is not None or p.suffix.lower() == ".csv"
    values: list[float] = []
    skipped = 0

    def bad(lineno: int, raw: str):
        nonlocal skipped
        if lenient:
            skipped += 1
            return
        raise IngestError(f"{p}: line {lineno}: not a number: {raw.strip()!r}", lineno)

    if not use_csv:
        for lineno, raw in enumerate(text.splitlines(), 1):
            if not raw.strip():
                continue
            try:
                values.append(_parse(raw))
            except ValueError:
                bad(lineno, raw)
        return Ingested(np.array(values, dtype=float), skipped)

    reader = csv.reader(io.StringIO(text))
    idx: int | None = None
    if isinstance(column, str) and not column.lstrip("-").isdigit():
        name = column
    else:
        name = None
        idx = int(column) if column is not None else 0
    first = True
    for row in reader:
        lineno = reader.line_num
        if not row or all(not f.strip() for f in row):
            continue
        if first:
            first = False
            if name is not None:
                idx = _column_index(row, name)
                continue
            try:
                _parse(row[idx])
            except (ValueError, IndexError):
                continue  # header row
        try:
            values.append(_parse(row[idx]))
        except (ValueError, IndexError):
            bad(lineno, ",".join(row))
    return Ingested(np.array(values, dtype=float), skipped)
