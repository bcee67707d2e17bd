"""Machine-readable report files.

JSON reports are UTF-8 with sorted keys and a trailing newline, so
re-reading and re-serializing a report reproduces it byte for byte.
CSV tables follow RFC 4180 (CRLF line endings, mandatory header row)
with floats rendered in scientific notation at 17 significant digits.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path

__all__ = [
    "format_cell",
    "json_bytes",
    "read_json",
    "write_csv",
    "write_json",
]


def json_bytes(payload) -> bytes:
    return (json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode(
        "utf-8"
    )


def write_json(payload, path) -> Path:
    path = Path(path)
    path.write_bytes(json_bytes(payload))
    return path


def read_json(path):
    with open(path, "rb") as handle:
        return json.loads(handle.read().decode("utf-8"))


def format_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".16e")
    if value is None:
        return ""
    return str(value)


def write_csv(rows, fieldnames, path) -> Path:
    """Write dict rows as an RFC-4180 table with the given column order."""
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(fieldnames)
        for row in rows:
            writer.writerow([format_cell(row.get(name)) for name in fieldnames])
    return path
