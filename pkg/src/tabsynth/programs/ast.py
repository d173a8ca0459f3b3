"""AST node types for the three program families.

Placeholder nodes (ColumnSlot, ValueSlot, CellSlot) only appear in
templates; instantiation replaces them with concrete ColumnName, Literal,
CellSel, or OpenValue nodes.  OpenValue marks a claim's comparison target
that is filled in later by the label decision step.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..values import Value

SQL = "sql"
LOGIC = "logic"
ARITH = "arith"
FAMILIES = (SQL, LOGIC, ARITH)


@dataclass(frozen=True)
class ColumnName:
    name: str


@dataclass(frozen=True)
class ColumnSlot:
    index: int
    numeric: bool = False


@dataclass(frozen=True)
class Literal:
    value: Value


@dataclass(frozen=True)
class ValueSlot:
    index: int


@dataclass(frozen=True)
class OpenValue:
    """Undecided comparison target of a claim; column is the bound column
    name, or None for count-valued targets."""
    index: int
    column: str | None


# --- SQL ---

@dataclass(frozen=True)
class SelectColumn:
    column: object  # ColumnName | ColumnSlot


@dataclass(frozen=True)
class SelectAgg:
    fn: str  # count | sum | max | min
    column: object


@dataclass(frozen=True)
class SelectDiff:
    left: object
    right: object


@dataclass(frozen=True)
class Condition:
    column: object
    op: str  # = | > | <
    operand: object  # Literal | ValueSlot


@dataclass(frozen=True)
class OrderBy:
    column: object
    descending: bool


@dataclass(frozen=True)
class SqlQuery:
    select: object
    where: tuple = ()
    order_by: OrderBy | None = None
    limit: int | None = None


# --- Logical forms ---

@dataclass(frozen=True)
class AllRows:
    pass


@dataclass(frozen=True)
class LogicNode:
    op: str
    args: tuple


# Positional argument kinds for logic operator signatures.
ROWS, COL, VAL, NTH, SCALAR_ARG, BOOL_ARG = "rows", "col", "val", "nth", "scalar", "bool"
# Output kinds.
OUT_ROWS, OUT_SCALAR, OUT_BOOL = "rows", "scalar", "bool"

LOGIC_SIGNATURES: dict[str, tuple[tuple[str, ...], str]] = {
    "filter_eq": ((ROWS, COL, VAL), OUT_ROWS),
    "filter_not_eq": ((ROWS, COL, VAL), OUT_ROWS),
    "filter_greater": ((ROWS, COL, VAL), OUT_ROWS),
    "filter_less": ((ROWS, COL, VAL), OUT_ROWS),
    "filter_all": ((ROWS, COL), OUT_ROWS),
    "argmax": ((ROWS, COL), OUT_ROWS),
    "argmin": ((ROWS, COL), OUT_ROWS),
    "nth_argmax": ((ROWS, COL, NTH), OUT_ROWS),
    "nth_argmin": ((ROWS, COL, NTH), OUT_ROWS),
    "hop": ((ROWS, COL), OUT_SCALAR),
    "count": ((ROWS,), OUT_SCALAR),
    "max": ((ROWS, COL), OUT_SCALAR),
    "min": ((ROWS, COL), OUT_SCALAR),
    "sum": ((ROWS, COL), OUT_SCALAR),
    "avg": ((ROWS, COL), OUT_SCALAR),
    "nth_max": ((ROWS, COL, NTH), OUT_SCALAR),
    "nth_min": ((ROWS, COL, NTH), OUT_SCALAR),
    "eq": ((SCALAR_ARG, SCALAR_ARG), OUT_BOOL),
    "not_eq": ((SCALAR_ARG, SCALAR_ARG), OUT_BOOL),
    "greater": ((SCALAR_ARG, SCALAR_ARG), OUT_BOOL),
    "less": ((SCALAR_ARG, SCALAR_ARG), OUT_BOOL),
    "most_eq": ((ROWS, COL, VAL), OUT_BOOL),
    "all_eq": ((ROWS, COL, VAL), OUT_BOOL),
    "unique": ((ROWS, COL, VAL), OUT_BOOL),
    "and": ((BOOL_ARG, BOOL_ARG), OUT_BOOL),
}

# Logic operators whose column argument must be numeric.
LOGIC_NUMERIC_COL_OPS = frozenset(
    {"argmax", "argmin", "nth_argmax", "nth_argmin",
     "max", "min", "sum", "avg", "nth_max", "nth_min"}
)


# --- Arithmetic expressions ---

@dataclass(frozen=True)
class CellSlot:
    index: int


@dataclass(frozen=True)
class CellSel:
    column: str
    row_label: str


@dataclass(frozen=True)
class StepRef:
    index: int


@dataclass(frozen=True)
class Step:
    op: str
    args: tuple


@dataclass(frozen=True)
class ArithProgram:
    steps: tuple


ARITH_BINARY_OPS = ("add", "subtract", "multiply", "divide", "greater", "exp")
ARITH_TABLE_OPS = ("table_max", "table_min", "table_sum", "table_average")


def family_of(program) -> str:
    if isinstance(program, SqlQuery):
        return SQL
    if isinstance(program, LogicNode):
        return LOGIC
    if isinstance(program, ArithProgram):
        return ARITH
    raise TypeError(f"not a program: {type(program).__name__}")


def transform(node, fn):
    """Rebuild an AST bottom-up, applying fn to every leaf reference node
    (ColumnName/ColumnSlot/Literal/ValueSlot/OpenValue/CellSlot/CellSel/
    StepRef).  fn returns the replacement node."""
    if isinstance(node, (ColumnName, ColumnSlot, Literal, ValueSlot,
                         OpenValue, CellSlot, CellSel, StepRef)):
        return fn(node)
    if isinstance(node, SqlQuery):
        return SqlQuery(
            transform(node.select, fn),
            tuple(transform(c, fn) for c in node.where),
            transform(node.order_by, fn) if node.order_by else None,
            node.limit,
        )
    if isinstance(node, SelectColumn):
        return SelectColumn(transform(node.column, fn))
    if isinstance(node, SelectAgg):
        return SelectAgg(node.fn, transform(node.column, fn))
    if isinstance(node, SelectDiff):
        return SelectDiff(transform(node.left, fn), transform(node.right, fn))
    if isinstance(node, Condition):
        return Condition(transform(node.column, fn), node.op, transform(node.operand, fn))
    if isinstance(node, OrderBy):
        return OrderBy(transform(node.column, fn), node.descending)
    if isinstance(node, LogicNode):
        return LogicNode(node.op, tuple(transform(a, fn) for a in node.args))
    if isinstance(node, ArithProgram):
        return ArithProgram(tuple(transform(s, fn) for s in node.steps))
    if isinstance(node, Step):
        return Step(node.op, tuple(transform(a, fn) for a in node.args))
    # AllRows, ints, None pass through untouched.
    return node


def walk(node):
    """Yield every AST node in a stable depth-first pre-order."""
    yield node
    if isinstance(node, SqlQuery):
        yield from walk(node.select)
        for c in node.where:
            yield from walk(c)
        if node.order_by:
            yield from walk(node.order_by)
    elif isinstance(node, SelectColumn):
        yield from walk(node.column)
    elif isinstance(node, SelectAgg):
        yield from walk(node.column)
    elif isinstance(node, SelectDiff):
        yield from walk(node.left)
        yield from walk(node.right)
    elif isinstance(node, Condition):
        yield from walk(node.column)
        yield from walk(node.operand)
    elif isinstance(node, OrderBy):
        yield from walk(node.column)
    elif isinstance(node, LogicNode):
        for a in node.args:
            if not isinstance(a, int):
                yield from walk(a)
    elif isinstance(node, ArithProgram):
        for s in node.steps:
            yield from walk(s)
    elif isinstance(node, Step):
        for a in node.args:
            yield from walk(a)
