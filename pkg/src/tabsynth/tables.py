"""Relational table model, loaders, and the context sidecar.

Tables are flat grids of typed values with a header row.  Column 0 is the
row-label column by default; JSON tables may override it.  Loaders accept
RFC-4180 CSV (first record is the header) and a JSON object with "header"
and "rows" keys.  All cells arrive as strings and are typed by parse_value.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from enum import Enum

from .errors import MalformedInputError
from .values import EMPTY, Kind, Number, Value, parse_value


class ColumnType(str, Enum):
    NUMERIC = "numeric"
    TEXTUAL = "textual"
    MIXED = "mixed"


@dataclass(frozen=True, order=True)
class CellRef:
    row: int
    col: int


def _normalize_name(name: str) -> str:
    return " ".join(name.split())


@dataclass
class Table:
    id: str
    column_names: list[str]
    rows: list[list[Value]]
    label_col: int = 0
    _types: list[ColumnType] | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if not self.column_names:
            raise MalformedInputError(f"table {self.id!r}: zero columns")
        names = [_normalize_name(n) for n in self.column_names]
        if any(not n for n in names):
            raise MalformedInputError(f"table {self.id!r}: blank column name")
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise MalformedInputError(f"table {self.id!r}: duplicate column names {dupes}")
        self.column_names = names
        width = len(names)
        for i, row in enumerate(self.rows):
            if len(row) != width:
                raise MalformedInputError(
                    f"table {self.id!r}: row {i} has {len(row)} cells, expected {width}"
                )
        if not (0 <= self.label_col < width):
            raise MalformedInputError(f"table {self.id!r}: label_col {self.label_col} out of range")

    @classmethod
    def from_strings(cls, table_id: str, header: list[str], rows: list[list[str]],
                     label_col: int = 0) -> "Table":
        typed = [[parse_value(c) for c in row] for row in rows]
        return cls(table_id, list(header), typed, label_col)

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def n_cols(self) -> int:
        return len(self.column_names)

    def column_index(self, name: str) -> int | None:
        try:
            return self.column_names.index(_normalize_name(name))
        except ValueError:
            return None

    def column_types(self) -> list[ColumnType]:
        """Numeric iff every non-Empty cell is a Number; Textual iff none is.

        Columns with no non-Empty cells (including every column of a 0-row
        table) are Textual by convention.
        """
        if self._types is None:
            types = []
            for c in range(self.n_cols):
                cells = [row[c] for row in self.rows if row[c].kind is not Kind.EMPTY]
                if not cells:
                    types.append(ColumnType.TEXTUAL)
                elif all(isinstance(v, Number) for v in cells):
                    types.append(ColumnType.NUMERIC)
                elif not any(isinstance(v, Number) for v in cells):
                    types.append(ColumnType.TEXTUAL)
                else:
                    types.append(ColumnType.MIXED)
            self._types = types
        return self._types

    def cell(self, ref: CellRef) -> Value:
        return self.rows[ref.row][ref.col]

    def row_label(self, row: int) -> str:
        return self.rows[row][self.label_col].surface()

    def find_row_by_label(self, label: str) -> int | None:
        """First row whose label cell surface matches, case-insensitive fallback."""
        for r in range(self.n_rows):
            if self.row_label(r) == label:
                return r
        folded = label.casefold()
        for r in range(self.n_rows):
            if self.row_label(r).casefold() == folded:
                return r
        return None

    def without_row(self, row: int, new_id: str | None = None) -> "Table":
        rows = [list(r) for i, r in enumerate(self.rows) if i != row]
        return Table(new_id or self.id, list(self.column_names), rows, self.label_col)

    def with_row(self, row: list[Value], new_id: str | None = None) -> "Table":
        rows = [list(r) for r in self.rows] + [list(row)]
        return Table(new_id or self.id, list(self.column_names), rows, self.label_col)

    def to_json_obj(self, include_id: bool = True) -> dict:
        obj = {}
        if include_id:
            obj["id"] = self.id
        obj["header"] = list(self.column_names)
        obj["rows"] = [[v.surface() for v in row] for row in self.rows]
        if self.label_col != 0:
            obj["label_col"] = self.label_col
        return obj


@dataclass
class Context:
    table_id: str
    paragraphs: list[str]

    def __post_init__(self):
        kept = [p.strip() for p in self.paragraphs]
        if any(not p for p in kept):
            raise MalformedInputError(f"context {self.table_id!r}: blank paragraph")
        self.paragraphs = kept


def load_table(data: str | bytes, fmt: str, table_id: str = "table") -> Table:
    """Load one table from CSV or JSON text.

    Raises MalformedInputError with row/line diagnostics on ragged rows,
    duplicate or blank headers, or zero columns.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    if fmt == "csv":
        return _load_csv(data, table_id)
    if fmt == "json":
        return _load_json(data, table_id)
    raise MalformedInputError(f"unknown table format {fmt!r}")


def _load_csv(text: str, table_id: str) -> Table:
    reader = csv.reader(io.StringIO(text))
    try:
        records = list(reader)
    except csv.Error as exc:
        raise MalformedInputError(f"table {table_id!r}: CSV error: {exc}") from exc
    records = [rec for rec in records if rec]
    if not records:
        raise MalformedInputError(f"table {table_id!r}: no header record")
    header, *body = records
    return Table.from_strings(table_id, header, body)


def _coerce_cell(cell, table_id: str, where: str) -> str:
    if isinstance(cell, str):
        return cell
    if isinstance(cell, bool) or cell is None:
        raise MalformedInputError(f"table {table_id!r}: non-string cell at {where}")
    if isinstance(cell, (int, float)):
        return str(cell)
    raise MalformedInputError(f"table {table_id!r}: non-string cell at {where}")


def _load_json(text: str, table_id: str) -> Table:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"table {table_id!r}: invalid JSON: {exc}") from exc
    if not isinstance(obj, dict) or "header" not in obj or "rows" not in obj:
        raise MalformedInputError(f"table {table_id!r}: expected object with header/rows")
    header = obj["header"]
    if not isinstance(header, list) or not all(isinstance(h, str) for h in header):
        raise MalformedInputError(f"table {table_id!r}: header must be a list of strings")
    rows = []
    for i, row in enumerate(obj["rows"]):
        if not isinstance(row, list):
            raise MalformedInputError(f"table {table_id!r}: row {i} is not a list")
        rows.append([_coerce_cell(c, table_id, f"row {i} col {j}") for j, c in enumerate(row)])
    tid = obj.get("id", table_id)
    if not isinstance(tid, str):
        raise MalformedInputError(f"table {table_id!r}: id must be a string")
    label_col = obj.get("label_col", 0)
    if not isinstance(label_col, int):
        raise MalformedInputError(f"table {tid!r}: label_col must be an integer")
    return Table.from_strings(tid, header, rows, label_col)


def load_contexts(text: str | bytes) -> dict[str, Context]:
    """Context sidecar: JSON object mapping table id -> list of paragraphs."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"context sidecar: invalid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise MalformedInputError("context sidecar: expected an object keyed by table id")
    out = {}
    for tid, paras in obj.items():
        if not isinstance(paras, list) or not all(isinstance(p, str) for p in paras):
            raise MalformedInputError(f"context {tid!r}: expected a list of strings")
        out[tid] = Context(tid, paras)
    return out
