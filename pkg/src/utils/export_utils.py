"""
CSV and JSON writers for the command-line reports.
"""

import io
import csv
import sys
import json
import logging
from contextlib import contextmanager
from typing import Iterable, Optional, TextIO


logger = logging.getLogger(__name__)


def format_cell(value) -> str:
    """
    CSV text for one value: empty for None, repr for floats so the
    full precision round-trips.
    """
    if value is None:
        return ''
    if isinstance(value, float):
        return repr(value)
    return str(value)


def rows_to_csv(rows: Iterable[dict], fieldnames: list[str]) -> str:
    """Render rows as CSV text with a header, '\\n' line endings."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(fieldnames)
    for row in rows:
        writer.writerow([format_cell(row[name]) for name in fieldnames])
    return buffer.getvalue()


def to_json(payload) -> str:
    """Render a payload as indented JSON, keys in insertion order."""
    return json.dumps(payload, indent=2) + '\n'


def render(rows: list[dict], fieldnames: list[str], fmt: str, summary: Optional[dict] = None) -> str:
    """
    Render a report in the requested format. JSON output is the list of
    rows, or an object with the summary fields and 'rows' when a summary
    is given.
    """
    if fmt == 'csv':
        return rows_to_csv(rows, fieldnames)
    if fmt == 'json':
        records = [{name: row[name] for name in fieldnames} for row in rows]
        if summary is None:
            return to_json(records)
        return to_json({**summary, 'rows': records})
    raise ValueError(f'Unknown output format {fmt!r}.')


@contextmanager
def open_output(path: Optional[str]) -> TextIO:
    """
    Yield a text stream for path, or standard output when path is None.
    """
    if path is None:
        yield sys.stdout
        return
    with open(path, 'w', encoding='utf-8', newline='') as f:
        yield f
    logger.info(f'Wrote {path}')
