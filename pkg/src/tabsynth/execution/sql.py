"""Evaluator for the SQL-like query family.

Pipeline per query: filter -> order -> limit -> project.  Every examined
cell is highlighted: all rows of each condition column, surviving rows of
the order column, and the cells the projection reads.
"""
from __future__ import annotations

from decimal import Decimal

from ..errors import (
    ExecTypeError, IncompleteBindingError, MissingColumnError,
    NonSingletonDiffError,
)
from ..programs.ast import (
    ColumnName, Condition, Literal, SelectAgg, SelectColumn, SelectDiff,
    SqlQuery,
)
from ..tables import CellRef, Table
from ..values import Empty, Number, Text, Value
from .compare import values_equal, values_less, value_sort_key
from .result import ExecResult


def _col_index(col, table: Table) -> int:
    if not isinstance(col, ColumnName):
        raise IncompleteBindingError(f"unbound column reference {col!r}")
    idx = table.column_index(col.name)
    if idx is None:
        raise MissingColumnError(f"no column named {col.name!r}")
    return idx


def _operand_value(operand) -> Value:
    if not isinstance(operand, Literal):
        raise IncompleteBindingError(f"unbound operand {operand!r}")
    return operand.value


def _matches(cell: Value, op: str, operand: Value) -> bool:
    if isinstance(cell, Empty):
        return False
    if op == "=":
        return values_equal(cell, operand)
    if op == ">":
        lt = values_less(operand, cell)
        return bool(lt)
    if op == "<":
        lt = values_less(cell, operand)
        return bool(lt)
    raise AssertionError(op)


def _ordered(rows: list[int], col: int, table: Table, descending: bool) -> list[int]:
    """Stable sort; Empty cells sort last in both directions."""
    filled = [r for r in rows if not isinstance(table.rows[r][col], Empty)]
    empty = [r for r in rows if isinstance(table.rows[r][col], Empty)]
    filled.sort(key=lambda r: value_sort_key(table.rows[r][col]), reverse=descending)
    return filled + empty


def exec_sql(query: SqlQuery, table: Table) -> ExecResult:
    hl: set[CellRef] = set()

    survivors = list(range(table.n_rows))
    for cond in query.where:
        ci = _col_index(cond.column, table)
        operand = _operand_value(cond.operand)
        for r in range(table.n_rows):
            hl.add(CellRef(r, ci))
        survivors = [r for r in survivors
                     if _matches(table.rows[r][ci], cond.op, operand)]

    if query.order_by:
        oi = _col_index(query.order_by.column, table)
        for r in survivors:
            hl.add(CellRef(r, oi))
        survivors = _ordered(survivors, oi, table, query.order_by.descending)

    if query.limit is not None:
        survivors = survivors[: query.limit]

    sel = query.select
    if isinstance(sel, SelectColumn):
        ci = _col_index(sel.column, table)
        for r in survivors:
            hl.add(CellRef(r, ci))
        if not survivors:
            return ExecResult.of_empty(hl)
        return ExecResult.of_cells([table.rows[r][ci] for r in survivors], hl)

    if isinstance(sel, SelectAgg):
        ci = _col_index(sel.column, table)
        for r in survivors:
            hl.add(CellRef(r, ci))
        if sel.fn == "count":
            return ExecResult.of_scalar(Number(Decimal(len(survivors))), hl)
        cells = [table.rows[r][ci] for r in survivors]
        if any(isinstance(c, Text) for c in cells):
            raise ExecTypeError(f"{sel.fn} over text cells in column {sel.column.name!r}")
        numbers = [c.magnitude for c in cells if isinstance(c, Number)]
        if not numbers:
            return ExecResult.of_empty(hl)
        if sel.fn == "sum":
            out = sum(numbers, Decimal(0))
        elif sel.fn == "max":
            out = max(numbers)
        else:
            out = min(numbers)
        return ExecResult.of_scalar(Number(out), hl)

    if isinstance(sel, SelectDiff):
        li = _col_index(sel.left, table)
        ri = _col_index(sel.right, table)
        if len(survivors) > 1:
            raise NonSingletonDiffError(
                f"difference requires exactly one row, found {len(survivors)}"
            )
        if not survivors:
            return ExecResult.of_empty(hl)
        r = survivors[0]
        hl.add(CellRef(r, li))
        hl.add(CellRef(r, ri))
        a, b = table.rows[r][li], table.rows[r][ri]
        if not (isinstance(a, Number) and isinstance(b, Number)):
            raise ExecTypeError("difference requires two numeric cells")
        return ExecResult.of_scalar(Number(a.magnitude - b.magnitude), hl)

    raise IncompleteBindingError(f"bad select clause {sel!r}")
