"""Canonical text rendering for programs and templates.

print_program is a right inverse of the parsers: parsing its output yields
an equal AST in either mode.  Identifiers are backtick-quoted only when a
bare spelling would be misread (reserved words, placeholder look-alikes,
numbers, embedded structural characters).
"""
from __future__ import annotations

import re

from ..values import Number, Text, parse_value
from .ast import (
    AllRows, ArithProgram, CellSel, CellSlot, ColumnName, ColumnSlot,
    Condition, Literal, LogicNode, OpenValue, OrderBy, SelectAgg,
    SelectColumn, SelectDiff, SqlQuery, Step, StepRef, ValueSlot,
    family_of,
)
from .parse import COLUMN_SLOT_RE, SQL_KEYWORDS, VALUE_SLOT_RE

_SIMPLE_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def _slot_like(name: str) -> bool:
    return bool(COLUMN_SLOT_RE.fullmatch(name) or VALUE_SLOT_RE.fullmatch(name))


def _backtick(name: str) -> str:
    return "`" + name.replace("`", "``") + "`"


def _sql_ident(name: str) -> str:
    if _SIMPLE_IDENT.fullmatch(name) and name not in SQL_KEYWORDS and not _slot_like(name):
        return name
    return _backtick(name)


def _logic_name(name: str) -> str:
    """Logic column names print bare unless structurally ambiguous; spaces
    are fine because ; { } delimit arguments."""
    if (not name or name != name.strip() or any(c in name for c in "{};`'")
            or name == "all_rows" or _slot_like(name)
            or isinstance(parse_value(name), Number)):
        return _backtick(name)
    return name


def _arith_name(name: str) -> str:
    if (not name or name != name.strip()
            or any(c in name for c in "(),#`") or " of " in name
            or _slot_like(name) or isinstance(parse_value(name), Number)):
        return _backtick(name)
    return name


def _literal_text(value) -> str:
    if isinstance(value, Number):
        return value.surface()
    if isinstance(value, Text):
        return "'" + value.text.replace("'", "''") + "'"
    raise TypeError(f"cannot print literal of kind {type(value).__name__}")


def _colref(node, ident) -> str:
    if isinstance(node, ColumnSlot):
        return f"c{node.index}_number" if node.numeric else f"c{node.index}"
    if isinstance(node, ColumnName):
        return ident(node.name)
    raise TypeError(f"not a column reference: {type(node).__name__}")


def _sql_operand(node) -> str:
    if isinstance(node, ValueSlot):
        return f"val{node.index}"
    if isinstance(node, OpenValue):
        return f"val{node.index}"
    if isinstance(node, Literal):
        return _literal_text(node.value)
    raise TypeError(f"not an operand: {type(node).__name__}")


def print_sql(q: SqlQuery) -> str:
    if isinstance(q.select, SelectAgg):
        select = f"{q.select.fn}({_colref(q.select.column, _sql_ident)})"
    elif isinstance(q.select, SelectDiff):
        select = (f"{_colref(q.select.left, _sql_ident)} - "
                  f"{_colref(q.select.right, _sql_ident)}")
    elif isinstance(q.select, SelectColumn):
        select = _colref(q.select.column, _sql_ident)
    else:
        raise TypeError(f"bad select clause: {type(q.select).__name__}")
    parts = [f"select {select} from w"]
    if q.where:
        conds = " and ".join(
            f"{_colref(c.column, _sql_ident)} {c.op} {_sql_operand(c.operand)}"
            for c in q.where
        )
        parts.append(f"where {conds}")
    if q.order_by:
        direction = "desc" if q.order_by.descending else "asc"
        parts.append(f"order by {_colref(q.order_by.column, _sql_ident)} {direction}")
    if q.limit is not None:
        parts.append(f"limit {q.limit}")
    return " ".join(parts)


def _logic_arg(arg) -> str:
    if isinstance(arg, LogicNode):
        return print_logic(arg)
    if isinstance(arg, AllRows):
        return "all_rows"
    if isinstance(arg, (ColumnName, ColumnSlot)):
        return _colref(arg, _logic_name)
    if isinstance(arg, (ValueSlot, OpenValue)):
        return f"val{arg.index}"
    if isinstance(arg, Literal):
        return _literal_text(arg.value)
    if isinstance(arg, int):
        return str(arg)
    raise TypeError(f"bad logic argument: {type(arg).__name__}")


def print_logic(node: LogicNode) -> str:
    inner = " ; ".join(_logic_arg(a) for a in node.args)
    return f"{node.op} {{ {inner} }}"


def _arith_atom(arg) -> str:
    if isinstance(arg, StepRef):
        return f"#{arg.index}"
    if isinstance(arg, CellSlot):
        return f"val{arg.index}"
    if isinstance(arg, CellSel):
        return f"{_arith_name(arg.column)} of {_arith_name(arg.row_label)}"
    if isinstance(arg, Literal):
        if not isinstance(arg.value, Number):
            raise TypeError("arithmetic literals must be numbers")
        return arg.value.surface()
    if isinstance(arg, (ColumnName, ColumnSlot)):
        return _colref(arg, _arith_name)
    raise TypeError(f"bad arithmetic argument: {type(arg).__name__}")


def print_arith(p: ArithProgram) -> str:
    return ", ".join(
        f"{s.op}({', '.join(_arith_atom(a) for a in s.args)})" for s in p.steps
    )


def print_program(program) -> str:
    family = family_of(program)
    if family == "sql":
        return print_sql(program)
    if family == "logic":
        return print_logic(program)
    return print_arith(program)
