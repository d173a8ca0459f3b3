"""Evaluator for the logical-form family.

Nodes produce one of three intermediate kinds: a row subset (list of
indices in table order), a scalar Value, or a claim boolean.  Aggregations
read Number cells among the rows they are given; a Text cell there is a
type error, and zero usable values is an empty intermediate (the sampler
discards such programs).
"""
from __future__ import annotations

from decimal import Decimal

from ..errors import (
    EmptyIntermediateError, ExecTypeError, IncompleteBindingError,
    MissingColumnError,
)
from ..programs.ast import AllRows, ColumnName, Literal, LogicNode, OpenValue
from ..tables import CellRef, Table
from ..values import Empty, Number, Text, Value
from .compare import scalars_equal, scalars_less, values_equal, values_less
from .result import ExecResult

_FILTER_TESTS = {
    "filter_eq": lambda cell, v: not isinstance(cell, Empty) and values_equal(cell, v),
    "filter_not_eq": lambda cell, v: not isinstance(cell, Empty) and not values_equal(cell, v),
    "filter_greater": lambda cell, v: bool(values_less(v, cell)),
    "filter_less": lambda cell, v: bool(values_less(cell, v)),
}


def _col_index(arg, table: Table) -> int:
    if not isinstance(arg, ColumnName):
        raise IncompleteBindingError(f"unbound column reference {arg!r}")
    idx = table.column_index(arg.name)
    if idx is None:
        raise MissingColumnError(f"no column named {arg.name!r}")
    return idx


def _literal_value(arg) -> Value:
    if isinstance(arg, OpenValue):
        raise IncompleteBindingError(f"claim target val{arg.index} is undecided")
    if not isinstance(arg, Literal):
        raise IncompleteBindingError(f"unbound value {arg!r}")
    return arg.value


def _numeric_cells(rows: list[int], col: int, table: Table, hl: set,
                   op: str) -> list[tuple[int, Decimal]]:
    """(row, magnitude) pairs among the given rows; highlights every
    examined cell, skips Empty, rejects Text."""
    out = []
    for r in rows:
        hl.add(CellRef(r, col))
        cell = table.rows[r][col]
        if isinstance(cell, Text):
            raise ExecTypeError(f"{op} over text cell at row {r}")
        if isinstance(cell, Number):
            out.append((r, cell.magnitude))
    return out


def _eval(node, table: Table, hl: set):
    if isinstance(node, AllRows):
        return list(range(table.n_rows))
    if isinstance(node, Literal):
        return node.value
    if isinstance(node, OpenValue):
        raise IncompleteBindingError(f"claim target val{node.index} is undecided")
    if not isinstance(node, LogicNode):
        raise IncompleteBindingError(f"cannot evaluate {node!r}")

    op = node.op

    if op in _FILTER_TESTS:
        rows = _eval(node.args[0], table, hl)
        col = _col_index(node.args[1], table)
        target = _literal_value(node.args[2])
        test = _FILTER_TESTS[op]
        for r in rows:
            hl.add(CellRef(r, col))
        return [r for r in rows if test(table.rows[r][col], target)]

    if op == "filter_all":
        rows = _eval(node.args[0], table, hl)
        col = _col_index(node.args[1], table)
        for r in rows:
            hl.add(CellRef(r, col))
        return list(rows)

    if op == "hop":
        rows = _eval(node.args[0], table, hl)
        col = _col_index(node.args[1], table)
        if not rows:
            raise EmptyIntermediateError("hop over zero rows")
        r = rows[0]
        hl.add(CellRef(r, col))
        return table.rows[r][col]

    if op == "count":
        rows = _eval(node.args[0], table, hl)
        return Number(Decimal(len(rows)))

    if op in ("max", "min", "sum", "avg"):
        rows = _eval(node.args[0], table, hl)
        col = _col_index(node.args[1], table)
        numbers = [m for _, m in _numeric_cells(rows, col, table, hl, op)]
        if not numbers:
            raise EmptyIntermediateError(f"{op} over zero numeric cells")
        if op == "max":
            return Number(max(numbers))
        if op == "min":
            return Number(min(numbers))
        if op == "sum":
            return Number(sum(numbers, Decimal(0)))
        return Number(sum(numbers, Decimal(0)) / Decimal(len(numbers)))

    if op in ("nth_max", "nth_min"):
        rows = _eval(node.args[0], table, hl)
        col = _col_index(node.args[1], table)
        n = node.args[2]
        numbers = sorted(
            (m for _, m in _numeric_cells(rows, col, table, hl, op)),
            reverse=(op == "nth_max"),
        )
        if n > len(numbers):
            raise EmptyIntermediateError(f"{op}: rank {n} of {len(numbers)} values")
        return Number(numbers[n - 1])

    if op in ("argmax", "argmin", "nth_argmax", "nth_argmin"):
        rows = _eval(node.args[0], table, hl)
        col = _col_index(node.args[1], table)
        n = node.args[2] if op.startswith("nth_") else 1
        pairs = _numeric_cells(rows, col, table, hl, op)
        descending = op.endswith("argmax")
        # ties keep table order: sort by magnitude only, stably
        pairs.sort(key=lambda p: p[1], reverse=descending)
        if n > len(pairs):
            raise EmptyIntermediateError(f"{op}: rank {n} of {len(pairs)} rows")
        return [pairs[n - 1][0]]

    if op in ("eq", "not_eq", "greater", "less"):
        a = _eval(node.args[0], table, hl)
        b = _eval(node.args[1], table, hl)
        if isinstance(a, list) or isinstance(b, list):
            raise ExecTypeError(f"{op} compares scalars, not row sets")
        if op == "eq":
            return scalars_equal(a, b)
        if op == "not_eq":
            return not scalars_equal(a, b)
        if op == "greater":
            return scalars_less(b, a)
        return scalars_less(a, b)

    if op in ("most_eq", "all_eq", "unique"):
        rows = _eval(node.args[0], table, hl)
        col = _col_index(node.args[1], table)
        target = _literal_value(node.args[2])
        if not rows:
            raise EmptyIntermediateError(f"{op} over zero rows")
        for r in rows:
            hl.add(CellRef(r, col))
        matches = sum(
            1 for r in rows
            if not isinstance(table.rows[r][col], Empty)
            and values_equal(table.rows[r][col], target)
        )
        if op == "most_eq":
            return matches * 2 > len(rows)
        if op == "all_eq":
            return matches == len(rows)
        return matches == 1

    if op == "and":
        a = _eval(node.args[0], table, hl)
        b = _eval(node.args[1], table, hl)
        if not (isinstance(a, bool) and isinstance(b, bool)):
            raise ExecTypeError("and requires two claims")
        return a and b

    raise IncompleteBindingError(f"unknown operator {op!r}")


def exec_logic(program: LogicNode, table: Table) -> ExecResult:
    hl: set[CellRef] = set()
    out = _eval(program, table, hl)
    if not isinstance(out, bool):
        raise ExecTypeError("logic program did not produce a claim")
    return ExecResult.of_bool(out, hl)


def eval_subexpression(node, table: Table, hl: set):
    """Evaluate a scalar- or rows-producing subtree (for the labeler)."""
    return _eval(node, table, hl)
