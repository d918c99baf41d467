"""Deterministic report files: a CSV table plus a JSON summary per run.

Identical inputs must produce byte-identical files, so nothing here emits
timestamps, locale formatting, or unsorted keys. Numeric cells are the exact
string form of the values the engine returned; the CLI never re-rounds.
"""

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

TABLE_COLUMNS = (
    "operation",
    "series",
    "day",
    "units",
    "inputs",
    "value",
    "unit",
    "rounding",
)


@dataclass(frozen=True)
class ReportRow:
    """One operation result with enough provenance to recompute it."""

    operation: str
    series: str
    day: int | str
    units: int | str
    inputs: str
    value: str
    unit: str
    rounding: str

    def as_tuple(self) -> tuple:
        return (
            self.operation,
            self.series,
            self.day,
            self.units,
            self.inputs,
            self.value,
            self.unit,
            self.rounding,
        )


def inputs_field(**pairs) -> str:
    """Deterministic key=value provenance string for the inputs column."""
    return ";".join(f"{key}={value}" for key, value in pairs.items())


def write_table(
    path: str | Path,
    rows: Iterable[Sequence],
    columns: Sequence[str] = TABLE_COLUMNS,
) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow(row)


def write_rows(path: str | Path, rows: Iterable[ReportRow]) -> None:
    write_table(path, (row.as_tuple() for row in rows))


def write_summary(path: str | Path, payload: dict) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2)
    Path(path).write_text(text + "\n", encoding="utf-8")
