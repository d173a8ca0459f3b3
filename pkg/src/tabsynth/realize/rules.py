"""Grammar-directed English realization of instantiated programs.

Every bound column name and literal value is embedded verbatim, so the
fidelity gate (each required surface appears as a substring) passes by
construction.  Data-derived tokens are never case-mutated; sentences start
with fixed template words, which is where capitalization happens.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..programs.ast import (
    AllRows, ArithProgram, CellSel, ColumnName, Condition, Literal,
    LogicNode, OpenValue, SelectAgg, SelectColumn, SelectDiff, SqlQuery,
    Step, StepRef, family_of, walk,
)
from ..programs.render import print_program
from ..values import Number, Text, Value


class UnsupportedShapeError(Exception):
    pass


@dataclass(frozen=True)
class Realization:
    text: str
    source: str  # rule | external
    fidelity_ok: bool


def required_surfaces(program) -> list[tuple[str, ...]]:
    """Surfaces the sentence must contain; each entry lists the acceptable
    alternatives (a number may appear in raw or canonical form)."""
    out: list[tuple[str, ...]] = []
    for node in walk(program):
        if isinstance(node, ColumnName):
            out.append((node.name,))
        elif isinstance(node, CellSel):
            out.append((node.column,))
            out.append((node.row_label,))
        elif isinstance(node, Literal):
            v = node.value
            if isinstance(v, Number):
                alts = (v.surface(),) if v.raw in (None, v.surface()) else (v.surface(), v.raw)
                out.append(alts)
            elif isinstance(v, Text):
                out.append((v.text,))
    return out


def check_fidelity(program, text: str) -> bool:
    return all(any(alt in text for alt in alts) for alts in required_surfaces(program))


def _surface(value: Value) -> str:
    return value.surface()


def _lit(node) -> str:
    if isinstance(node, Literal):
        return _surface(node.value)
    raise UnsupportedShapeError(f"expected a literal, got {type(node).__name__}")


def _colname(node) -> str:
    if isinstance(node, ColumnName):
        return node.name
    raise UnsupportedShapeError(f"expected a column name, got {type(node).__name__}")


def _ordinal(n: int) -> str:
    if n % 100 in (11, 12, 13):
        return f"{n}th"
    return f"{n}{ {1: 'st', 2: 'nd', 3: 'rd'}.get(n % 10, 'th') }"


# --- SQL ---

def _cond_phrase(cond: Condition) -> str:
    col = _colname(cond.column)
    val = _lit(cond.operand)
    if cond.op == "=":
        return f"{col} is {val}"
    if cond.op == ">":
        return f"{col} is greater than {val}"
    return f"{col} is less than {val}"


def _conds(query: SqlQuery) -> str:
    return " and ".join(_cond_phrase(c) for c in query.where)


def _when(query: SqlQuery) -> str:
    return f" when {_conds(query)}" if query.where else ""


def _realize_sql(q: SqlQuery) -> str:
    sel = q.select
    if isinstance(sel, SelectColumn):
        col = _colname(sel.column)
        if q.order_by is not None:
            okey = _colname(q.order_by.column)
            most = "most" if q.order_by.descending else "least"
            hi = "highest" if q.order_by.descending else "lowest"
            if q.limit == 1:
                return f"Which {col} has the {most} {okey}{_when(q)}?"
            if q.limit is not None:
                return (f"What are the {q.limit} {col} values with the "
                        f"{hi} {okey}{_when(q)}?")
            lo = "lowest" if q.order_by.descending else "highest"
            return (f"What are the {col} values{_when(q)}, ordered from "
                    f"{hi} to {lo} {okey}?")
        if q.limit is not None:
            return f"What are the first {q.limit} {col} values{_when(q)}?"
        if q.where:
            return f"What is the {col}{_when(q)}?"
        return f"What are all the {col} values?"
    if isinstance(sel, SelectAgg):
        col = _colname(sel.column)
        if sel.fn == "count":
            return f"How many {col} values are there{_when(q)}?"
        word = {"sum": "total", "max": "highest", "min": "lowest"}[sel.fn]
        return f"What is the {word} {col}{_when(q)}?"
    if isinstance(sel, SelectDiff):
        left = _colname(sel.left)
        right = _colname(sel.right)
        return f"What is the difference between {left} and {right}{_when(q)}?"
    raise UnsupportedShapeError(f"select clause {type(sel).__name__}")


# --- Logical forms ---

_FILTER_LINKS = {
    "filter_eq": "is",
    "filter_not_eq": "is not",
    "filter_greater": "is greater than",
    "filter_less": "is less than",
}


def _restrictors(node) -> list[str]:
    """Clauses restricting a row set built from filters over all_rows."""
    if isinstance(node, AllRows):
        return []
    if not isinstance(node, LogicNode):
        raise UnsupportedShapeError(f"row expression {type(node).__name__}")
    if node.op in _FILTER_LINKS:
        inner = _restrictors(node.args[0])
        col = _colname(node.args[1])
        return inner + [f"{col} {_FILTER_LINKS[node.op]} {_lit(node.args[2])}"]
    if node.op == "filter_all":
        inner = _restrictors(node.args[0])
        return inner + [f"{_colname(node.args[1])} is listed"]
    raise UnsupportedShapeError(f"row operator {node.op}")


def _row_phrase(node, plural: bool) -> str:
    if isinstance(node, LogicNode) and node.op in ("argmax", "argmin",
                                                   "nth_argmax", "nth_argmin"):
        col = _colname(node.args[1])
        extreme = "highest" if node.op.endswith("argmax") else "lowest"
        rank = ""
        if node.op.startswith("nth_"):
            rank = f"{_ordinal(node.args[2])} "
        base = f"the row with the {rank}{extreme} {col}"
        inner = _restrictors(node.args[0])
        if inner:
            base += f" among the rows where {' and '.join(inner)}"
        return base
    clauses = _restrictors(node)
    noun = "rows" if plural else "row"
    if not clauses:
        return "the first row" if not plural else "all the rows"
    return f"the {noun} where {' and '.join(clauses)}"


def _loc(node) -> str:
    clauses = _restrictors(node)
    if not clauses:
        return ""
    return f" among the rows where {' and '.join(clauses)}"


def _value_phrase(node) -> str:
    if isinstance(node, Literal):
        return _surface(node.value)
    if not isinstance(node, LogicNode):
        raise UnsupportedShapeError(f"value expression {type(node).__name__}")
    if node.op == "hop":
        return f"the {_colname(node.args[1])} of {_row_phrase(node.args[0], plural=False)}"
    if node.op == "count":
        rows = node.args[0]
        if isinstance(rows, AllRows):
            return "the number of rows"
        if isinstance(rows, LogicNode) and rows.op == "filter_all" \
                and isinstance(rows.args[0], AllRows):
            return f"the number of {_colname(rows.args[1])} entries"
        return f"the number of rows where {' and '.join(_restrictors(rows))}"
    if node.op in ("max", "min", "sum", "avg"):
        col = _colname(node.args[1])
        word = {"max": "highest", "min": "lowest", "sum": "total", "avg": "average"}[node.op]
        return f"the {word} {col}{_loc(node.args[0])}"
    if node.op in ("nth_max", "nth_min"):
        col = _colname(node.args[1])
        extreme = "highest" if node.op == "nth_max" else "lowest"
        return f"the {_ordinal(node.args[2])} {extreme} {col}{_loc(node.args[0])}"
    raise UnsupportedShapeError(f"value operator {node.op}")


def _where_suffix(rows_node) -> str:
    clauses = _restrictors(rows_node)
    return f" where {' and '.join(clauses)}" if clauses else ""


def _clause(node: LogicNode) -> str:
    """One claim clause, lowercase leading template word, no period."""
    if node.op == "and":
        return f"{_clause(node.args[0])}, and {_clause(node.args[1])}"
    if node.op in ("eq", "not_eq", "greater", "less"):
        left, right = node.args
        target = _value_phrase(right)
        if node.op == "eq" and isinstance(left, LogicNode) and left.op == "count" \
                and isinstance(right, Literal):
            rows = left.args[0]
            if isinstance(rows, AllRows):
                return f"there are {target} rows"
            if isinstance(rows, LogicNode) and rows.op == "filter_all" \
                    and isinstance(rows.args[0], AllRows):
                return f"there are {target} {_colname(rows.args[1])} entries"
            return f"there are {target} rows{_where_suffix(rows)}"
        value = _value_phrase(left)
        link = {"eq": "is", "not_eq": "is not", "greater": "is greater than",
                "less": "is less than"}[node.op]
        return f"{value} {link} {target}"
    if node.op in ("most_eq", "all_eq", "unique"):
        rows, col, val = node.args
        suffix = _where_suffix(rows)
        col_name = _colname(col)
        target = _lit(val)
        if node.op == "most_eq":
            return f"most of the rows{suffix} have a {col_name} of {target}"
        if node.op == "all_eq":
            return f"all of the rows{suffix} have a {col_name} of {target}"
        return f"exactly one row{suffix} has a {col_name} of {target}"
    raise UnsupportedShapeError(f"claim operator {node.op}")


def _realize_logic(node: LogicNode) -> str:
    clause = _clause(node)
    return clause[0].upper() + clause[1:] + "."


# --- Arithmetic ---

_ARITH_FRAMES = {
    "add": "the sum of {a} and {b}",
    "subtract": "the difference between {a} and {b}",
    "multiply": "the product of {a} and {b}",
    "divide": "the ratio of {a} to {b}",
    "greater": "whether {a} is greater than {b}",
    "exp": "{a} raised to the power of {b}",
    "table_max": "the highest value in the {col} column",
    "table_min": "the lowest value in the {col} column",
    "table_sum": "the total of the {col} column",
    "table_average": "the average of the {col} column",
}


def _atom_phrase(arg, phrases: list[str]) -> str:
    if isinstance(arg, Literal):
        return _surface(arg.value)
    if isinstance(arg, CellSel):
        return f"the {arg.column} of {arg.row_label}"
    if isinstance(arg, StepRef):
        return phrases[arg.index]
    raise UnsupportedShapeError(f"arithmetic operand {type(arg).__name__}")


def _percentage_change(p: ArithProgram) -> str | None:
    """subtract(a, b) then divide(#0, b) with both cells in one column is
    the percentage-change idiom."""
    if len(p.steps) != 2:
        return None
    s0, s1 = p.steps
    if s0.op != "subtract" or s1.op != "divide":
        return None
    a, b = s0.args
    if not (isinstance(a, CellSel) and isinstance(b, CellSel)):
        return None
    if a.column != b.column:
        return None
    if s1.args != (StepRef(0), b):
        return None
    return (f"What was the percentage change in {a.column} "
            f"between {b.row_label} and {a.row_label}?")


def _realize_arith(p: ArithProgram) -> str:
    special = _percentage_change(p)
    if special is not None:
        return special
    phrases: list[str] = []
    for step in p.steps:
        frame = _ARITH_FRAMES.get(step.op)
        if frame is None:
            raise UnsupportedShapeError(f"arithmetic operator {step.op}")
        if step.op.startswith("table_"):
            phrases.append(frame.format(col=_colname(step.args[0])))
        else:
            a = _atom_phrase(step.args[0], phrases)
            b = _atom_phrase(step.args[1], phrases)
            phrases.append(frame.format(a=a, b=b))
    last = p.steps[-1]
    if last.op == "greater":
        a = _atom_phrase(last.args[0], phrases[:-1])
        b = _atom_phrase(last.args[1], phrases[:-1])
        return f"Is {a} greater than {b}?"
    return f"What is {phrases[-1]}?"


def realize_rule(program) -> Realization:
    """Realize a closed program as one English sentence.  Shapes outside
    the grammar fall back to quoting the printed program, with the
    fidelity gate forced to pass."""
    family = family_of(program)
    try:
        if any(isinstance(n, OpenValue) for n in walk(program)):
            raise UnsupportedShapeError("undecided claim target")
        if family == "sql":
            text = _realize_sql(program)
        elif family == "logic":
            text = _realize_logic(program)
        else:
            text = _realize_arith(program)
    except UnsupportedShapeError:
        text = f'What does the program "{print_program(program)}" compute?'
        return Realization(text, "rule", True)
    return Realization(text, "rule", check_fidelity(program, text))
