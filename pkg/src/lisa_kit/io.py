"""CSV reading and writing for distance matrices and attribute values.

Distance file: header ``id,<label1>,...,<labeln>``, then one row per unit,
``<labeli>,<d_i1>,...,<d_in>``, with row labels repeating the header labels
in the same order. Values file: header ``id,value`` or ``id,<col1>,<col2>,...``
with one labeled row per unit. UTF-8, ``.`` as the decimal separator.

Writers emit floats through repr(), the shortest digit string that parses
back to the identical float, so a written file re-ingested through these
readers reproduces the original arrays bit for bit.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import CsvFormatError
from .matrices import DistanceMatrix, FloatArray
from .variables import AttributeVector


def _rows(path: str) -> list[list[str]]:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            return list(csv.reader(fh))
    except OSError as exc:
        raise CsvFormatError(path, 0, f"cannot read file: {exc}") from exc


def _parse_floats(path: str, line: int, cells: list[str]) -> list[float]:
    out = []
    for cell in cells:
        try:
            out.append(float(cell))
        except ValueError:
            raise CsvFormatError(path, line, f"not a number: {cell!r}") from None
    return out


def read_distance_csv(path: str) -> DistanceMatrix:
    """Parse a distance file. Format trouble raises CsvFormatError naming
    file and line; structural trouble (asymmetry, nonpositive entries)
    propagates from DistanceMatrix validation."""
    rows = _rows(path)
    if not rows:
        raise CsvFormatError(path, 1, "empty file")
    header = rows[0]
    if len(header) < 3 or header[0].strip().lower() != "id":
        raise CsvFormatError(path, 1, "expected header 'id,<label>,...' with >= 2 labels")
    labels = [cell.strip() for cell in header[1:]]
    n = len(labels)
    body = rows[1:]
    if len(body) != n:
        raise CsvFormatError(path, len(rows), f"expected {n} data rows, found {len(body)}")
    matrix = []
    for k, row in enumerate(body):
        line = k + 2
        if len(row) != n + 1:
            raise CsvFormatError(path, line, f"expected {n + 1} cells, found {len(row)}")
        if row[0].strip() != labels[k]:
            raise CsvFormatError(
                path, line, f"row label {row[0].strip()!r} does not match header label {labels[k]!r}"
            )
        matrix.append(_parse_floats(path, line, row[1:]))
    return DistanceMatrix.from_array(labels, matrix)


@dataclass(frozen=True)
class ValueTable:
    """Labeled rows with one or more named value columns."""

    labels: tuple[str, ...]
    columns: tuple[str, ...]
    data: FloatArray  # shape (n, len(columns))

    def column(self, name: str | None) -> AttributeVector:
        """Select one column as an AttributeVector.

        With name=None the table must have exactly one column.
        """
        if name is None:
            if len(self.columns) != 1:
                raise ValueError(
                    f"file has columns {', '.join(self.columns)}; pick one with --column"
                )
            name = self.columns[0]
        if name not in self.columns:
            raise ValueError(
                f"no column {name!r}; file has {', '.join(self.columns)}"
            )
        idx = self.columns.index(name)
        return AttributeVector.from_values(self.labels, self.data[:, idx])


def read_values_csv(path: str) -> ValueTable:
    rows = _rows(path)
    if not rows:
        raise CsvFormatError(path, 1, "empty file")
    header = rows[0]
    if len(header) < 2 or header[0].strip().lower() != "id":
        raise CsvFormatError(path, 1, "expected header 'id,<column>,...'")
    columns = tuple(cell.strip() for cell in header[1:])
    if len(set(columns)) != len(columns):
        raise CsvFormatError(path, 1, "duplicate column names")
    labels = []
    data = []
    for k, row in enumerate(rows[1:]):
        line = k + 2
        if len(row) != len(columns) + 1:
            raise CsvFormatError(path, line, f"expected {len(columns) + 1} cells, found {len(row)}")
        labels.append(row[0].strip())
        data.append(_parse_floats(path, line, row[1:]))
    if len(labels) < 2:
        raise CsvFormatError(path, len(rows), "need at least 2 data rows")
    arr = np.array(data, dtype=np.float64)
    arr.setflags(write=False)
    return ValueTable(tuple(labels), columns, arr)


def fmt(x: float) -> str:
    """Shortest decimal string that round-trips to the same float."""
    return repr(float(x))


def write_distance_csv(path: str, d: DistanceMatrix) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", *d.labels])
        for i, label in enumerate(d.labels):
            writer.writerow([label, *(fmt(x) for x in d.d[i])])


def write_values_csv(path: str, labels, columns: list[tuple[str, np.ndarray]]) -> None:
    """columns is an ordered list of (name, values) pairs."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", *(name for name, _ in columns)])
        for i, label in enumerate(labels):
            writer.writerow([label, *(fmt(vals[i]) for _, vals in columns)])
