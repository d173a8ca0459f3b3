"""Program templates: placeholder analysis, canonical keys, pack files.

A template is a parsed program that may contain placeholders.  Analysis
derives, for every placeholder, the constraints the sampler needs: which
column slots must be numeric, which column each value slot draws from, and
which value slots are claim targets decided by the labeler instead of
sampled up front.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import DanglingValueError, TemplateError
from .ast import (
    ARITH_TABLE_OPS, LOGIC_NUMERIC_COL_OPS, AllRows, ArithProgram,
    CellSlot, ColumnName, ColumnSlot, Condition, Literal, LogicNode,
    OrderBy, SelectAgg, SelectColumn, SelectDiff, SqlQuery, Step,
    ValueSlot, transform, walk,
)
from .parse import parse_program
from .render import print_program

# Binding target of a value slot: a column slot index (int), a concrete
# column name (str), or None for count-valued comparison targets.
Binding = int | str | None


@dataclass
class ProgramTemplate:
    family: str
    ast: object
    source: str
    weight: float = 1.0
    column_slots: dict[int, bool] = field(default_factory=dict)
    value_bindings: dict[int, Binding] = field(default_factory=dict)
    open_slots: tuple[int, ...] = ()
    cell_slots: tuple[int, ...] = ()
    key: str = ""

    @property
    def task(self) -> str:
        """Logic programs are claims (fact verification); the rest are QA."""
        return "fv" if self.family == "logic" else "qa"


def parse_template(text: str, family: str, weight: float = 1.0) -> ProgramTemplate:
    ast = parse_program(text, family, template=True)
    tpl = ProgramTemplate(family, ast, text.strip(), weight)
    _analyze(tpl)
    tpl.key = canonical_key(tpl)
    return tpl


def _colkey(col) -> Binding:
    if isinstance(col, ColumnSlot):
        return col.index
    if isinstance(col, ColumnName):
        return col.name
    return None


def _analyze(tpl: ProgramTemplate):
    numeric: dict[int, bool] = {}
    bindings: dict[int, Binding] = {}
    cells: list[int] = []

    def see_col(col, requires_numeric: bool):
        if isinstance(col, ColumnSlot):
            numeric[col.index] = numeric.get(col.index, False) or col.numeric or requires_numeric

    def bind(slot: ValueSlot, col):
        bindings.setdefault(slot.index, _colkey(col))

    if tpl.family == "sql":
        q: SqlQuery = tpl.ast
        sel = q.select
        if isinstance(sel, SelectColumn):
            see_col(sel.column, False)
        elif isinstance(sel, SelectAgg):
            see_col(sel.column, sel.fn in ("sum", "max", "min"))
        elif isinstance(sel, SelectDiff):
            see_col(sel.left, True)
            see_col(sel.right, True)
        for cond in q.where:
            see_col(cond.column, False)
            if isinstance(cond.operand, ValueSlot):
                bind(cond.operand, cond.column)
        if q.order_by:
            see_col(q.order_by.column, False)
    elif tpl.family == "logic":
        open_slots = _collect_open_slots(tpl.ast)
        for node in walk(tpl.ast):
            if not isinstance(node, LogicNode):
                continue
            if node.op in ("filter_eq", "filter_not_eq", "filter_greater", "filter_less",
                           "most_eq", "all_eq", "unique"):
                see_col(node.args[1], False)
                if isinstance(node.args[2], ValueSlot):
                    bind(node.args[2], node.args[1])
            elif node.op in LOGIC_NUMERIC_COL_OPS:
                see_col(node.args[1], True)
            elif node.op in ("hop", "filter_all"):
                see_col(node.args[1], False)
            elif node.op in ("eq", "not_eq", "greater", "less"):
                a, b = node.args
                self_numeric = node.op in ("greater", "less")
                for slot, other in ((b, a), (a, b)):
                    if isinstance(slot, ValueSlot) and isinstance(other, LogicNode):
                        col = _output_column(other)
                        if col is not None:
                            see_col(col, self_numeric)
                            bind(slot, col)
                        else:
                            bindings.setdefault(slot.index, None)
        tpl.open_slots = tuple(sorted(open_slots))
        occurrences: dict[int, int] = {}
        for node in walk(tpl.ast):
            if isinstance(node, ValueSlot):
                occurrences[node.index] = occurrences.get(node.index, 0) + 1
                if node.index not in bindings and node.index not in open_slots:
                    raise DanglingValueError(
                        f"val{node.index} has no bound column and is not a claim target"
                    )
                if bindings.get(node.index, None) is None and node.index not in open_slots:
                    raise DanglingValueError(
                        f"val{node.index} is count-valued but not a claim target"
                    )
        for idx in open_slots:
            # a claim target is decided per conjunct; reuse would let one
            # placeholder take two values
            if occurrences.get(idx, 0) > 1:
                raise TemplateError(f"claim target val{idx} is reused elsewhere")
    else:  # arith
        for node in walk(tpl.ast):
            if isinstance(node, Step) and node.op in ARITH_TABLE_OPS:
                see_col(node.args[0], True)
            elif isinstance(node, CellSlot):
                if node.index not in cells:
                    cells.append(node.index)
        tpl.cell_slots = tuple(sorted(cells))

    for node in walk(tpl.ast):
        if isinstance(node, ColumnSlot):
            numeric.setdefault(node.index, node.numeric)
    tpl.column_slots = dict(sorted(numeric.items()))
    tpl.value_bindings = dict(sorted(bindings.items()))


def _output_column(node: LogicNode):
    """The column a scalar-producing subtree reads its value from, or None
    for count (whose output is not a cell value)."""
    if node.op in ("hop", "max", "min", "sum", "avg", "nth_max", "nth_min"):
        return node.args[1]
    return None


def _collect_open_slots(node: LogicNode) -> set[int]:
    """Claim targets: the final argument along the boolean root spine."""
    out: set[int] = set()
    if node.op == "and":
        for a in node.args:
            if isinstance(a, LogicNode):
                out |= _collect_open_slots(a)
    elif node.op in ("eq", "not_eq", "greater", "less"):
        if isinstance(node.args[1], ValueSlot):
            out.add(node.args[1].index)
    elif node.op in ("most_eq", "all_eq", "unique"):
        if isinstance(node.args[2], ValueSlot):
            out.add(node.args[2].index)
    return out


def canonicalize(tpl: ProgramTemplate) -> str:
    return tpl.key or canonical_key(tpl)


def canonical_key(tpl: ProgramTemplate) -> str:
    """Placeholder-renumbered canonical text, prefixed with the family.
    Two templates equal up to placeholder numbering and whitespace share
    a key."""
    col_order: dict[int, int] = {}
    val_order: dict[int, int] = {}
    for node in walk(tpl.ast):
        if isinstance(node, ColumnSlot) and node.index not in col_order:
            col_order[node.index] = len(col_order) + 1
        elif isinstance(node, (ValueSlot, CellSlot)) and node.index not in val_order:
            val_order[node.index] = len(val_order) + 1

    def renumber(leaf):
        if isinstance(leaf, ColumnSlot):
            return ColumnSlot(col_order[leaf.index], leaf.numeric)
        if isinstance(leaf, ValueSlot):
            return ValueSlot(val_order[leaf.index])
        if isinstance(leaf, CellSlot):
            return CellSlot(val_order[leaf.index])
        return leaf

    return f"{tpl.family}|{print_program(transform(tpl.ast, renumber))}"


def dedupe_templates(templates: list[ProgramTemplate]) -> list[ProgramTemplate]:
    """Keep the first template per canonical key, preserving order."""
    seen: set[str] = set()
    out = []
    for tpl in templates:
        key = canonicalize(tpl)
        if key not in seen:
            seen.add(key)
            out.append(tpl)
    return out


def load_pack(text: str, origin: str = "pack") -> list[ProgramTemplate]:
    """Template pack: one template per line, `family|template[|weight]`.
    Blank lines and lines starting with '#' are skipped."""
    templates = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("|")
        if len(parts) not in (2, 3):
            raise TemplateError(
                f"{origin}:{lineno}: expected family|template[|weight], got {len(parts)} fields"
            )
        family = parts[0].strip()
        body = parts[1].strip()
        weight = 1.0
        if len(parts) == 3:
            try:
                weight = float(parts[2].strip())
            except ValueError:
                raise TemplateError(f"{origin}:{lineno}: bad weight {parts[2].strip()!r}")
            if not weight >= 0:
                raise TemplateError(f"{origin}:{lineno}: weight must be >= 0")
        if family not in ("sql", "logic", "arith"):
            raise TemplateError(f"{origin}:{lineno}: unknown family {family!r}")
        try:
            templates.append(parse_template(body, family, weight))
        except TemplateError as exc:
            raise TemplateError(f"{origin}:{lineno}: {exc}") from exc
    return templates
