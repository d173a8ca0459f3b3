"""Evaluator for the arithmetic-expression family.

A program is a sequence of steps; #i references the i-th earlier result.
Cell selectors resolve a row by its label (first match wins), so the whole
label column counts as examined.  All arithmetic is exact Decimal; greater
yields 1 or 0.
"""
from __future__ import annotations

import decimal
from decimal import Decimal

from ..errors import (
    DivideByZeroError, EmptyIntermediateError, ExecTypeError,
    IncompleteBindingError, MissingColumnError, UnresolvedCellError,
)
from ..programs.ast import (
    ArithProgram, CellSel, ColumnName, Literal, StepRef,
)
from ..tables import CellRef, Table
from ..values import Number, Text
from .result import ExecResult

_MAX_EXPONENT = Decimal(100)


def _resolve_cell(sel: CellSel, table: Table, hl: set) -> Decimal:
    col = table.column_index(sel.column)
    if col is None:
        raise MissingColumnError(f"no column named {sel.column!r}")
    # label resolution scans the whole label column
    for r in range(table.n_rows):
        hl.add(CellRef(r, table.label_col))
    row = table.find_row_by_label(sel.row_label)
    if row is None:
        raise UnresolvedCellError(f"no row labeled {sel.row_label!r}")
    hl.add(CellRef(row, col))
    cell = table.rows[row][col]
    if not isinstance(cell, Number):
        raise ExecTypeError(
            f"cell {sel.column!r} of {sel.row_label!r} is not numeric"
        )
    return cell.magnitude


def _column_values(col_arg, table: Table, hl: set, op: str) -> list[Decimal]:
    if not isinstance(col_arg, ColumnName):
        raise IncompleteBindingError(f"unbound column reference {col_arg!r}")
    ci = table.column_index(col_arg.name)
    if ci is None:
        raise MissingColumnError(f"no column named {col_arg.name!r}")
    out = []
    for r in range(table.n_rows):
        hl.add(CellRef(r, ci))
        cell = table.rows[r][ci]
        if isinstance(cell, Text):
            raise ExecTypeError(f"{op} over text cell at row {r}")
        if isinstance(cell, Number):
            out.append(cell.magnitude)
    if not out:
        raise EmptyIntermediateError(f"{op} over zero numeric cells")
    return out


def _operand(arg, results: list[Decimal], table: Table, hl: set) -> Decimal:
    if isinstance(arg, Literal):
        if not isinstance(arg.value, Number):
            raise ExecTypeError("arithmetic literals must be numbers")
        return arg.value.magnitude
    if isinstance(arg, StepRef):
        return results[arg.index]
    if isinstance(arg, CellSel):
        return _resolve_cell(arg, table, hl)
    raise IncompleteBindingError(f"unbound operand {arg!r}")


def _power(a: Decimal, b: Decimal) -> Decimal:
    if abs(b) > _MAX_EXPONENT:
        raise ExecTypeError(f"exponent {b} out of range")
    if a == 0 and b < 0:
        raise DivideByZeroError("zero raised to a negative power")
    if a < 0 and b != b.to_integral_value():
        raise ExecTypeError("negative base with fractional exponent")
    try:
        return a ** b
    except (decimal.InvalidOperation, decimal.Overflow) as exc:
        raise ExecTypeError(f"power out of range: {exc}") from exc


def exec_arith(program: ArithProgram, table: Table) -> ExecResult:
    hl: set[CellRef] = set()
    results: list[Decimal] = []
    for step in program.steps:
        if step.op == "add":
            a, b = (_operand(x, results, table, hl) for x in step.args)
            results.append(a + b)
        elif step.op == "subtract":
            a, b = (_operand(x, results, table, hl) for x in step.args)
            results.append(a - b)
        elif step.op == "multiply":
            a, b = (_operand(x, results, table, hl) for x in step.args)
            results.append(a * b)
        elif step.op == "divide":
            a, b = (_operand(x, results, table, hl) for x in step.args)
            if b == 0:
                raise DivideByZeroError("division by zero")
            results.append(a / b)
        elif step.op == "greater":
            a, b = (_operand(x, results, table, hl) for x in step.args)
            results.append(Decimal(1) if a > b else Decimal(0))
        elif step.op == "exp":
            a, b = (_operand(x, results, table, hl) for x in step.args)
            results.append(_power(a, b))
        elif step.op == "table_max":
            results.append(max(_column_values(step.args[0], table, hl, step.op)))
        elif step.op == "table_min":
            results.append(min(_column_values(step.args[0], table, hl, step.op)))
        elif step.op == "table_sum":
            results.append(sum(_column_values(step.args[0], table, hl, step.op), Decimal(0)))
        elif step.op == "table_average":
            values = _column_values(step.args[0], table, hl, step.op)
            results.append(sum(values, Decimal(0)) / Decimal(len(values)))
        else:
            raise IncompleteBindingError(f"unknown operation {step.op!r}")
    return ExecResult.of_scalar(Number(results[-1]), hl)
