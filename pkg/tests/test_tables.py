"""Table model, loaders, and the context sidecar."""
from __future__ import annotations

import json
from decimal import Decimal

import pytest

from tabsynth.errors import MalformedInputError
from tabsynth.tables import (
    CellRef, ColumnType, Table, load_contexts, load_table,
)
from tabsynth.values import Empty, Number, Text


def make(rows, header=("name", "points", "group"), label_col=0):
    return Table.from_strings("t", list(header), rows, label_col)


def test_from_strings_types_cells():
    t = make([["ada", "3", "x"], ["bo", "-", "y"]])
    assert isinstance(t.rows[0][1], Number)
    assert t.rows[0][1].magnitude == Decimal(3)
    assert isinstance(t.rows[1][1], Empty)
    assert isinstance(t.rows[0][0], Text)
    assert t.n_rows == 2 and t.n_cols == 3


def test_duplicate_column_names_rejected():
    with pytest.raises(MalformedInputError, match="duplicate column"):
        make([], header=("a", "b", "a"))


def test_normalized_duplicate_column_names_rejected():
    with pytest.raises(MalformedInputError, match="duplicate column"):
        make([], header=("total  points", "total points"))


def test_blank_column_name_rejected():
    with pytest.raises(MalformedInputError, match="blank column name"):
        make([], header=("a", "  ", "c"))


def test_zero_columns_rejected():
    with pytest.raises(MalformedInputError, match="zero columns"):
        Table.from_strings("t", [], [])


def test_ragged_row_rejected():
    with pytest.raises(MalformedInputError, match="row 1 has 2 cells"):
        make([["a", "1", "x"], ["b", "2"]])


def test_label_col_out_of_range_rejected():
    with pytest.raises(MalformedInputError, match="label_col"):
        make([], label_col=3)


def test_column_index_normalizes_whitespace():
    t = make([], header=("name", "total  points", "group"))
    assert t.column_names[1] == "total points"
    assert t.column_index("total   points") == 1
    assert t.column_index("absent") is None


def test_column_types_conventions():
    t = make(
        [
            ["ada", "3", "x"],
            ["bo", "-", "4"],
            ["cy", "5.5", "y"],
        ]
    )
    assert t.column_types() == [
        ColumnType.TEXTUAL,   # all text
        ColumnType.NUMERIC,   # numbers with an Empty gap
        ColumnType.MIXED,     # text and number
    ]


def test_all_empty_column_is_textual_by_convention():
    t = make([["ada", "-", "x"]], header=("name", "gap", "group"))
    assert t.column_types()[1] is ColumnType.TEXTUAL
    empty = make([])
    assert empty.column_types() == [ColumnType.TEXTUAL] * 3


def test_find_row_by_label_exact_before_casefold():
    t = make([["ADA", "1", "x"], ["ada", "2", "y"], ["bo", "3", "z"]])
    assert t.find_row_by_label("ada") == 1      # exact match wins
    assert t.find_row_by_label("ADA") == 0
    assert t.find_row_by_label("Ada") == 0      # casefold falls back to first
    assert t.find_row_by_label("BO") == 2
    assert t.find_row_by_label("nope") is None


def test_row_label_uses_label_column():
    t = make([["1", "ada", "x"]], header=("rank", "name", "group"), label_col=1)
    assert t.row_label(0) == "ada"


def test_without_row_and_with_row_are_nondestructive():
    t = make([["a", "1", "x"], ["b", "2", "y"]])
    shorter = t.without_row(0)
    longer = t.with_row([Text("c"), Number(Decimal(3)), Empty()])
    assert shorter.n_rows == 1 and shorter.rows[0][0].text == "b"
    assert longer.n_rows == 3 and longer.rows[2][0].text == "c"
    assert t.n_rows == 2  # original untouched
    assert t.cell(CellRef(1, 1)).magnitude == Decimal(2)


def test_to_json_obj_round_trips_surfaces():
    t = make([["a", "1,234", "-"]])
    obj = t.to_json_obj()
    assert obj["id"] == "t"
    assert obj["header"] == ["name", "points", "group"]
    assert obj["rows"] == [["a", "1234", ""]]
    assert "label_col" not in obj
    obj2 = t.to_json_obj(include_id=False)
    assert "id" not in obj2


def test_to_json_obj_keeps_nonzero_label_col():
    t = make([["1", "a", "x"]], label_col=1)
    assert t.to_json_obj()["label_col"] == 1


def test_csv_loader_with_quoting():
    raw = 'name,visitors\n"ada, jr","1,234"\nbo,7\n'
    t = load_table(raw.encode("utf-8"), "csv", table_id="v")
    assert t.id == "v"
    assert t.rows[0][0].text == "ada, jr"
    assert t.rows[0][1].magnitude == Decimal(1234)
    assert t.rows[1][1].magnitude == Decimal(7)


def test_csv_loader_rejects_empty_input():
    with pytest.raises(MalformedInputError, match="no header"):
        load_table(b"", "csv")


def test_json_loader_with_label_col():
    obj = {"header": ["rank", "name"], "rows": [[1, "ada"], [2, "bo"]],
           "label_col": 1, "id": "j"}
    t = load_table(json.dumps(obj).encode("utf-8"), "json")
    assert t.id == "j"
    assert t.label_col == 1
    assert t.rows[0][0].magnitude == Decimal(1)
    assert t.row_label(1) == "bo"


@pytest.mark.parametrize(
    "payload, message",
    [
        (b"[1, 2]", "header/rows"),
        (b"{\"header\": [\"a\"]}", "header/rows"),
        (b"{\"header\": [\"a\"], \"rows\": [[null]]}", "non-string cell"),
        (b"{\"header\": [\"a\"], \"rows\": [[true]]}", "non-string cell"),
        (b"{\"header\": [\"a\"], \"rows\": [\"x\"]}", "not a list"),
        (b"{\"header\": [1], \"rows\": []}", "list of strings"),
        (b"not json", "invalid JSON"),
    ],
)
def test_json_loader_diagnostics(payload, message):
    with pytest.raises(MalformedInputError, match=message):
        load_table(payload, "json")


def test_unknown_format_rejected():
    with pytest.raises(MalformedInputError, match="unknown table format"):
        load_table(b"x", "xml")


def test_contexts_sidecar():
    raw = json.dumps({"t1": ["First paragraph.", " padded "], "t2": []})
    ctx = load_contexts(raw.encode("utf-8"))
    assert ctx["t1"].paragraphs == ["First paragraph.", "padded"]
    assert ctx["t2"].paragraphs == []


@pytest.mark.parametrize(
    "raw",
    ["[]", "{\"t\": \"not a list\"}", "{\"t\": [1]}", "{\"t\": [\"\"]}", "nope"],
)
def test_contexts_sidecar_diagnostics(raw):
    with pytest.raises(MalformedInputError):
        load_contexts(raw)
