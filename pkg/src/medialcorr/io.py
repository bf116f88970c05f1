"""CSV ingestion and report/sample serialization."""
from __future__ import annotations

import csv
import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from .estimator import DataMatrix
from .report import CoefficientsReport
from .sampler import SampleBatch

__all__ = [
    "CsvSpec",
    "CsvError",
    "load_csv",
    "write_report",
    "read_report",
    "format_table",
    "write_sample_csv",
]

# plain decimal literal with '.' as separator; no thousands marks, no nan/inf
_NUMBER = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")


class CsvError(ValueError):
    """Malformed input file; the message names the offending row and column."""


@dataclass(frozen=True)
class CsvSpec:
    delimiter: str = ","
    has_header: bool = True
    selected_columns: Sequence[Union[str, int]] = field(default_factory=tuple)

    def __post_init__(self):
        if self.delimiter not in (",", ";"):
            raise ValueError(f"delimiter must be ',' or ';', got {self.delimiter!r}")
        cols = tuple(self.selected_columns)
        if len(cols) < 2:
            raise ValueError("select at least two columns")
        if len(set(cols)) != len(cols):
            raise ValueError("selected columns must be distinct")
        object.__setattr__(self, "selected_columns", cols)


def _resolve(spec: CsvSpec, header):
    idx = []
    for col in spec.selected_columns:
        if isinstance(col, (int, np.integer)):
            width = len(header) if header is not None else None
            if col < 0 or (width is not None and col >= width):
                raise CsvError(f"column index {col} out of range")
            idx.append(int(col))
        else:
            if header is None:
                raise CsvError(f"column name {col!r} given but the file has no header")
            names = [h.strip() for h in header]
            if col.strip() not in names:
                raise CsvError(f"unknown column {col!r}; available: {', '.join(names)}")
            idx.append(names.index(col.strip()))
    if len(set(idx)) != len(idx):
        raise CsvError("selected columns refer to the same column twice")
    return idx


def load_csv(path, spec: CsvSpec) -> DataMatrix:
    """Read the selected columns of a delimited text file into a DataMatrix."""
    path = Path(path)
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh, delimiter=spec.delimiter))
    rows = [r for r in rows if r and any(c.strip() for c in r)]
    header = rows.pop(0) if spec.has_header and rows else None
    idx = _resolve(spec, header)
    width = len(header) if header is not None else (len(rows[0]) if rows else 0)
    if any(i >= width for i in idx):
        raise CsvError(f"column index out of range for {width} columns")
    first_line = 2 if header is not None else 1
    out = np.empty((len(rows), len(idx)))
    for r, row in enumerate(rows):
        if len(row) != width:
            raise CsvError(f"row {r + first_line}: expected {width} fields, found {len(row)}")
        for c, i in enumerate(idx):
            cell = row[i].strip()
            if not _NUMBER.match(cell):
                name = header[i].strip() if header is not None else f"#{i}"
                raise CsvError(f"row {r + first_line}, column {name!r}: cannot parse {row[i]!r} as a number")
            out[r, c] = float(cell)
    if len(rows) < 2:
        raise CsvError(f"need at least 2 data rows, found {len(rows)}")
    if header is not None:
        labels = tuple(header[i].strip() for i in idx)
    else:
        labels = tuple(f"X{i + 1}" for i in idx)
    return DataMatrix(out, labels)


def _r3(x: float) -> str:
    # adding 0.0 turns a rounded -0.0 into 0.0
    return f"{round(x, 3) + 0.0:.3f}"


def format_table(report: CoefficientsReport) -> str:
    """Plain-text table: one row per coordinate, overall value in the middle row."""
    labels = report.labels or tuple(f"X{i + 1}" for i in range(report.d))
    rows = []
    mid = (report.d - 1) // 2
    for i, comp in enumerate(report.components):
        rest = ", ".join(l for j, l in enumerate(labels) if j != i)
        rows.append(["{" + labels[i] + "}", "{" + rest + "}", _r3(comp), _r3(report.beta) if i == mid else ""])
    head = ["{i}", "D\\{i}", "beta_{i,D\\{i}}", "beta"]
    widths = [max(len(r[k]) for r in rows + [head]) for k in range(4)]
    fmt = lambda r: " | ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip(" |")
    lines = [fmt(head), "-+-".join("-" * w for w in widths)] + [fmt(r) for r in rows]
    return "\n".join(lines) + "\n"


def write_report(report: CoefficientsReport, path=None, format: str = "json") -> str:
    """Serialize ``report`` as JSON or a 3-decimal table; write it to ``path`` if given."""
    if format == "json":
        text = report.to_json()
    elif format == "table":
        text = format_table(report)
    else:
        raise ValueError(f"unknown report format {format!r}")
    if path is not None:
        Path(path).write_text(text)
    return text


def read_report(path) -> CoefficientsReport:
    return CoefficientsReport.from_dict(json.loads(Path(path).read_text()))


def write_sample_csv(batch: SampleBatch, path) -> None:
    """Write a sample with header ``u1,...,ud`` at full float precision."""
    d = batch.data.shape[1]
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([f"u{i + 1}" for i in range(d)])
        for row in batch.data:
            w.writerow([repr(float(x)) for x in row])
