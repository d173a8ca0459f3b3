"""Table/text hybridization.

table_to_text removes one highlighted row and verbalizes it, producing a
(sub-table, sentence) pair whose cells still partition the original table;
text_to_table scans context paragraphs for a novel row label plus
column-name/number pairs and appends the recovered row.  Both directions
keep every surface form intact so downstream samples stay verifiable.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass
from decimal import Decimal

from .execution.result import ExecResult
from .tables import CellRef, ColumnType, Table
from .values import EMPTY, Empty, Number, Text, Value, parse_value

_SENTENCE_SPLIT = re.compile(r"(?<=[.!?])\s+")
_TOKEN = re.compile(r"\d[\d,]*(?:\.\d+)?%?|[A-Za-z][A-Za-z0-9'_-]*")
# words that should not lead a row label even when capitalized
_LABEL_STOPWORDS = frozenset(
    {"the", "a", "an", "in", "on", "at", "of", "and", "or", "for", "with",
     "to", "by", "it", "its", "this", "that", "there"}
)
_MAX_LABEL_TOKENS = 4
_NUMBER_WINDOW = 6


@dataclass
class SplitResult:
    table: Table          # original minus the removed row
    sentence: str
    removed_row: int
    removed_cells: list[Value]
    anchor: CellRef


@dataclass
class ExpandResult:
    table: Table          # original plus the recovered row
    paragraph_index: int
    label: Value
    extracted: dict[str, Value]  # column name -> recovered number
    row_index: int


def table_to_text(table: Table, result: ExecResult, rng: random.Random,
                  min_rows: int = 1) -> SplitResult | None:
    """Remove the row of one highlighted cell and verbalize it.  Returns
    None when the preconditions fail (too few rows, nothing highlighted)."""
    if table.n_rows < 2 or not result.highlighted:
        return None
    if table.n_rows - 1 < min_rows:
        return None
    anchors = sorted(result.highlighted)
    anchor = anchors[rng.randrange(len(anchors))]
    row = anchor.row
    cells = list(table.rows[row])

    label = table.row_label(row)
    subject = label if label else f"Row {row + 1}"
    parts = [
        f"{table.column_names[c]} of {cells[c].surface()}"
        for c in range(table.n_cols)
        if c != table.label_col and not isinstance(cells[c], Empty)
    ]
    if parts:
        sentence = f"{subject} has {', '.join(parts)}."
    else:
        sentence = f"{subject} has no other recorded values."

    return SplitResult(table.without_row(row), sentence, row, cells, anchor)


def _tokenize(sentence: str) -> list[str]:
    return _TOKEN.findall(sentence)


def _number_of(token: str) -> Decimal | None:
    v = parse_value(token)
    return v.magnitude if isinstance(v, Number) else None


def _name_tokens(name: str) -> list[str]:
    return [t.casefold() for t in _TOKEN.findall(name)]


def _find_subsequence(tokens_cf: list[str], needle: list[str]) -> list[int]:
    """Start indices where needle occurs as a contiguous token run."""
    if not needle:
        return []
    out = []
    for i in range(len(tokens_cf) - len(needle) + 1):
        if tokens_cf[i:i + len(needle)] == needle:
            out.append(i)
    return out


def _extract_pairs(tokens: list[str], tokens_cf: list[str], table: Table,
                   target_cols: list[int]) -> tuple[dict[int, tuple[Decimal, str]], set[int]]:
    """(column -> number, surface) pairs; a number token position feeds at
    most one column.  Columns scan in table order, positions left to right."""
    pairs: dict[int, tuple[Decimal, str]] = {}
    consumed: set[int] = set()
    for c in target_cols:
        needle = _name_tokens(table.column_names[c])
        for start in _find_subsequence(tokens_cf, needle):
            found = False
            window_end = min(len(tokens), start + len(needle) + _NUMBER_WINDOW)
            for j in range(start + len(needle), window_end):
                if j in consumed:
                    continue
                magnitude = _number_of(tokens[j])
                if magnitude is not None:
                    pairs[c] = (magnitude, tokens[j])
                    consumed.add(j)
                    found = True
                    break
            if found:
                break
    return pairs, consumed


def _candidate_label(tokens: list[str], tokens_cf: list[str], consumed: set[int],
                     table: Table) -> Value | None:
    existing = {table.row_label(r).casefold() for r in range(table.n_rows)}
    label_type = table.column_types()[table.label_col]
    if label_type is ColumnType.NUMERIC:
        known = {
            cell.magnitude
            for cell in (row[table.label_col] for row in table.rows)
            if isinstance(cell, Number)
        }
        for j, tok in enumerate(tokens):
            if j in consumed:
                continue
            magnitude = _number_of(tok)
            if magnitude is not None and magnitude not in known:
                return parse_value(tok)
        return None

    column_tokens = {t for name in table.column_names for t in _name_tokens(name)}
    anchor = next((j for j, tok in enumerate(tokens) if _number_of(tok) is not None),
                  len(tokens))
    candidates: list[tuple[int, str]] = []
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if _number_of(tok) is not None or not tok[0].isupper():
            i += 1
            continue
        run = []
        j = i
        while (j < len(tokens) and len(run) < _MAX_LABEL_TOKENS
               and _number_of(tokens[j]) is None and tokens[j][0].isupper()):
            run.append(tokens[j])
            j += 1
        start = i
        while run and run[0].casefold() in _LABEL_STOPWORDS:
            run = run[1:]
            start += 1
        if run:
            joined = " ".join(run)
            if (joined.casefold() not in existing
                    and not all(t.casefold() in column_tokens for t in run)):
                candidates.append((start, joined))
        i = j + 1 if j > i else i + 1
    if not candidates:
        return None
    # Sentence-initial capitalization makes early runs unreliable; the run
    # nearest the sentence's first number is most likely its subject.
    start, joined = min(candidates, key=lambda c: (abs(c[0] - anchor), c[0]))
    return Text(joined)


def text_to_table(table: Table, paragraphs: list[str]) -> ExpandResult | None:
    """Recover one row from the paragraphs and append it.  The first
    sentence with a novel label and at least one (column, number) pair
    wins; None when no sentence qualifies."""
    if not paragraphs or table.n_cols < 2:
        return None
    types = table.column_types()
    target_cols = [
        c for c in range(table.n_cols)
        if c != table.label_col
        and types[c] in (ColumnType.NUMERIC, ColumnType.MIXED)
    ]
    if not target_cols:
        return None

    for p_idx, paragraph in enumerate(paragraphs):
        for sentence in _SENTENCE_SPLIT.split(paragraph):
            tokens = _tokenize(sentence)
            if not tokens:
                continue
            tokens_cf = [t.casefold() for t in tokens]
            pairs, consumed = _extract_pairs(tokens, tokens_cf, table, target_cols)
            if not pairs:
                continue
            label = _candidate_label(tokens, tokens_cf, consumed, table)
            if label is None:
                continue
            row: list[Value] = [EMPTY] * table.n_cols
            row[table.label_col] = label
            extracted: dict[str, Value] = {}
            for c, (magnitude, surface) in pairs.items():
                value = parse_value(surface)
                row[c] = value
                extracted[table.column_names[c]] = value
            return ExpandResult(table.with_row(row), p_idx, label, extracted,
                                table.n_rows)
    return None
