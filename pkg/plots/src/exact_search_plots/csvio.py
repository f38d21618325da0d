"""Reading of the documented exact-search CSV schemas.

Cells are kept as the exact substrings found in the file, never parsed into
floats and re-rendered, so downstream value echoes can be compared byte for
byte against the input.
"""

from __future__ import annotations

from dataclasses import dataclass


class SchemaError(ValueError):
    """Input CSV does not match the documented column schema."""


@dataclass(frozen=True)
class Table:
    columns: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]

    def column(self, name: str) -> list[str]:
        idx = self.columns.index(name)
        return [row[idx] for row in self.rows]


def read_csv(path: str) -> Table:
    """Parse a report CSV, skipping '#' metadata comment lines."""
    with open(path) as fh:
        lines = [line.rstrip("\n") for line in fh]
    body = [l for l in lines if l and not l.startswith("#")]
    if not body:
        raise SchemaError(f"{path}: empty CSV (no header row)")
    columns = tuple(body[0].split(","))
    rows = []
    for i, line in enumerate(body[1:], start=2):
        cells = tuple(line.split(","))
        if len(cells) != len(columns):
            raise SchemaError(
                f"{path}: row {i} has {len(cells)} cells, header has {len(columns)}"
            )
        rows.append(cells)
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return Table(columns, tuple(rows))


def require_columns(table: Table, needed: list[str], path: str) -> None:
    missing = [c for c in needed if c not in table.columns]
    if missing:
        raise SchemaError(
            f"{path}: missing column(s) {', '.join(missing)}; "
            f"found: {', '.join(table.columns)}"
        )
