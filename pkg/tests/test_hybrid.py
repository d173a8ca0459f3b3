"""Table/text conversions: splitting a row into prose and recovering one from prose."""

import random
from collections import Counter
from decimal import Decimal

from tabsynth.execution.sql import exec_sql
from tabsynth.hybrid import table_to_text, text_to_table
from tabsynth.programs.parse import parse_sql
from tabsynth.tables import Table
from tabsynth.values import Empty, Number, Text


def cell_key(value):
    if isinstance(value, Number):
        return ("n", value.magnitude)
    if isinstance(value, Text):
        return ("t", value.text)
    return ("e",)


def multiset(table):
    return Counter(cell_key(v) for row in table.rows for v in row)


def highlights_for(table, query="select * placeholder"):
    return exec_sql(parse_sql(query), table)


class TestSplit:
    def run_split(self, toy_table, seed=0):
        result = exec_sql(parse_sql("select budget from w"), toy_table)
        return table_to_text(toy_table, result, random.Random(seed))

    def test_cells_partition_exactly(self, toy_table):
        split = self.run_split(toy_table)
        assert split is not None
        assert multiset(split.table) + Counter(
            cell_key(v) for v in split.removed_cells
        ) == multiset(toy_table)
        assert split.table.n_rows == toy_table.n_rows - 1

    def test_sentence_names_the_removed_row(self, toy_table):
        split = self.run_split(toy_table)
        label = toy_table.row_label(split.removed_row)
        assert split.sentence.startswith(f"{label} has ")
        for c, name in enumerate(toy_table.column_names):
            if c == toy_table.label_col:
                continue
            cell = toy_table.rows[split.removed_row][c]
            if isinstance(cell, Empty):
                continue
            assert f"{name} of {cell.surface()}" in split.sentence

    def test_anchor_is_a_highlighted_cell_in_the_removed_row(self, toy_table):
        result = exec_sql(parse_sql("select budget from w"), toy_table)
        split = table_to_text(toy_table, result, random.Random(3))
        assert split.anchor in result.highlighted
        assert split.anchor.row == split.removed_row

    def test_same_seed_same_split(self, toy_table):
        result = exec_sql(parse_sql("select budget from w"), toy_table)
        a = table_to_text(toy_table, result, random.Random(5))
        b = table_to_text(toy_table, result, random.Random(5))
        assert a.removed_row == b.removed_row
        assert a.sentence == b.sentence

    def test_single_row_table_cannot_split(self):
        table = Table.from_strings("t", ["name", "v"], [["a", "1"]])
        result = exec_sql(parse_sql("select v from w"), table)
        assert table_to_text(table, result, random.Random(0)) is None

    def test_min_rows_floor_is_respected(self, toy_table):
        result = exec_sql(parse_sql("select budget from w"), toy_table)
        assert table_to_text(toy_table, result, random.Random(0),
                             min_rows=toy_table.n_rows) is None

    def test_blank_cells_are_left_out_of_the_sentence(self):
        table = Table.from_strings(
            "t", ["name", "a", "b"], [["x", "1", "-"], ["y", "2", "3"]]
        )
        result = exec_sql(parse_sql("select a from w where name = 'x'"), table)
        split = table_to_text(table, result, random.Random(0))
        assert split.removed_row == 0
        assert split.sentence == "x has a of 1."


class TestExpand:
    def table(self):
        return Table.from_strings(
            "t",
            ["department", "budget", "chairs"],
            [["state", "120.5", "2"], ["treasury", "210.75", "3"]],
        )

    def test_recovers_a_row_from_prose(self):
        paragraphs = [
            "Reorganization left Public Works with a budget of 300.5 and chairs of 6."
        ]
        out = text_to_table(self.table(), paragraphs)
        assert out is not None
        assert out.label == Text("Public Works")
        assert out.extracted["budget"] == Number(Decimal("300.5"), raw="300.5")
        assert out.extracted["chairs"] == Number(Decimal(6), raw="6")
        assert out.row_index == 2
        appended = out.table.rows[2]
        assert appended[0] == Text("Public Works")
        assert out.table.n_rows == 3

    def test_every_extracted_number_appears_in_the_paragraph(self):
        paragraphs = [
            "Analysts noted Harbor Authority held a budget of 88.25 while chairs stayed at 4."
        ]
        out = text_to_table(self.table(), paragraphs)
        assert out is not None
        for value in out.extracted.values():
            surface = value.raw or value.surface()
            assert surface in paragraphs[out.paragraph_index]

    def test_unmatched_paragraphs_are_skipped(self):
        paragraphs = [
            "The weather was pleasant throughout the spring.",
            "Council minutes mention Parks Board with a budget of 55 and chairs of 1.",
        ]
        out = text_to_table(self.table(), paragraphs)
        assert out is not None
        assert out.paragraph_index == 1
        assert out.label == Text("Parks Board")

    def test_missing_columns_are_padded_blank(self):
        paragraphs = ["Auditors say Civic Trust now has a budget of 77."]
        out = text_to_table(self.table(), paragraphs)
        assert out is not None
        assert out.extracted == {"budget": Number(Decimal(77), raw="77")}
        assert isinstance(out.table.rows[2][2], Empty)

    def test_existing_label_is_not_novel(self):
        # "treasury" already names a row, so the sentence offers no new label.
        paragraphs = ["meanwhile treasury reported a budget of 99."]
        assert text_to_table(self.table(), paragraphs) is None

    def test_numeric_label_column_takes_a_novel_number(self):
        table = Table.from_strings(
            "t", ["year", "budget"], [["2001", "10"], ["2002", "20"]]
        )
        out = text_to_table(table, ["In 2003 the budget of 30 was approved."])
        assert out is not None
        assert out.label == Number(Decimal(2003), raw="2003")
        assert out.extracted["budget"] == Number(Decimal(30), raw="30")

    def test_no_paragraphs_or_no_numeric_columns(self):
        assert text_to_table(self.table(), []) is None
        text_only = Table.from_strings("t", ["name", "motto"], [["a", "onward"]])
        assert text_to_table(text_only, ["A motto of note: onward 5."]) is None
        single = Table.from_strings("t", ["name"], [["a"]])
        assert text_to_table(single, ["Anything with a 5."]) is None

    def test_bundled_contexts_expand_some_tables(self, assets_dir):
        import json

        from tabsynth.pipeline.generate import load_tables
        from tabsynth.tables import load_contexts

        tables = {t.id: t for t in load_tables(assets_dir / "toytables")}
        contexts = load_contexts(
            (assets_dir / "toytables_contexts.json").read_text(encoding="utf-8")
        )
        hits = 0
        for table_id, ctx in contexts.items():
            table = tables.get(table_id)
            if table is None:
                continue
            out = text_to_table(table, ctx.paragraphs)
            if out is None:
                continue
            hits += 1
            for value in out.extracted.values():
                surface = value.raw or value.surface()
                assert surface in ctx.paragraphs[out.paragraph_index]
        assert hits >= 10
