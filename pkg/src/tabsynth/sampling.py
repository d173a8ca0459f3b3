"""Random template instantiation against a table.

sample_binding draws distinct columns for the column placeholders (numeric
placeholders only from Numeric columns) and cell values for the value
placeholders; instantiate substitutes them into the AST; sample_program
wraps both in a bounded retry loop that discards empty results and, for
claims, enforces the drawn target label.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import (
    ConfigError, ExecError, IncompleteBindingError, NoEligibleColumnsError,
)
from .execution import decide_claim_arg, exec_program
from .execution.result import ExecResult
from .programs.ast import (
    CellSel, CellSlot, ColumnName, ColumnSlot, Literal, OpenValue,
    ValueSlot, transform,
)
from .programs.templates import ProgramTemplate
from .tables import CellRef, ColumnType, Table
from .values import Empty, Number, Value

LABELS = ("Supported", "Refuted")


@dataclass
class SamplerConfig:
    seed: int = 0
    max_attempts_per_template: int = 20
    label_ratio: float = 0.5
    allow_empty_result: bool = False  # reserved knob; empties are always discarded

    def __post_init__(self):
        if self.max_attempts_per_template < 1:
            raise ConfigError("max_attempts_per_template must be >= 1")
        if not 0.0 <= self.label_ratio <= 1.0:
            raise ConfigError("label_ratio must be within [0, 1]")
        if self.allow_empty_result:
            raise ConfigError("allow_empty_result is reserved and must stay False")


@dataclass
class Binding:
    columns: dict[int, str] = field(default_factory=dict)
    values: dict[int, tuple[Value, CellRef]] = field(default_factory=dict)


@dataclass
class SampledProgram:
    template: ProgramTemplate
    program: object
    result: ExecResult
    label: str | None
    binding: Binding
    perturbations: list[str]
    attempts: int


def _resolvable_rows(table: Table) -> list[int]:
    """Rows whose label is non-blank and wins first-match resolution."""
    first: dict[str, int] = {}
    for r in range(table.n_rows):
        surface = table.row_label(r)
        if surface:
            first.setdefault(surface, r)
    return [r for r in range(table.n_rows)
            if table.row_label(r) and first[table.row_label(r)] == r]


def sample_binding(template: ProgramTemplate, table: Table,
                   rng: random.Random) -> Binding:
    """Draw one complete binding.  Raises NoEligibleColumnsError when the
    table cannot satisfy the template's placeholders; that failure is
    structural, so callers should not retry it."""
    binding = Binding()
    types = table.column_types()

    # numeric placeholders claim their columns first so the plain ones
    # cannot starve them
    ordered = sorted(template.column_slots.items(), key=lambda kv: (not kv[1], kv[0]))
    available = list(table.column_names)
    for slot, needs_numeric in ordered:
        pool = [c for c in available
                if not needs_numeric or types[table.column_index(c)] is ColumnType.NUMERIC]
        if not pool:
            raise NoEligibleColumnsError(
                f"no remaining {'numeric ' if needs_numeric else ''}column for c{slot}"
            )
        name = pool[rng.randrange(len(pool))]
        available.remove(name)
        binding.columns[slot] = name

    for idx in sorted(template.value_bindings):
        if idx in template.open_slots:
            continue
        key = template.value_bindings[idx]
        col_name = binding.columns[key] if isinstance(key, int) else key
        ci = table.column_index(col_name)
        if ci is None:
            raise NoEligibleColumnsError(f"no column named {col_name!r} for val{idx}")
        pool = [r for r in range(table.n_rows)
                if not isinstance(table.rows[r][ci], Empty)]
        if not pool:
            raise NoEligibleColumnsError(f"column {col_name!r} has no values for val{idx}")
        r = pool[rng.randrange(len(pool))]
        binding.values[idx] = (table.rows[r][ci], CellRef(r, ci))

    if template.cell_slots:
        rows = _resolvable_rows(table)
        pool = [CellRef(r, c) for c in range(table.n_cols) if c != table.label_col
                for r in rows if isinstance(table.rows[r][c], Number)]
        for idx in template.cell_slots:
            if not pool:
                raise NoEligibleColumnsError(f"no numeric cell left for val{idx}")
            ref = pool.pop(rng.randrange(len(pool)))
            binding.values[idx] = (table.cell(ref), ref)
    return binding


def instantiate(template: ProgramTemplate, binding: Binding, table: Table):
    """Substitute a binding into the template AST.  Claim targets stay open
    (OpenValue) for the labeler."""
    def repl(leaf):
        if isinstance(leaf, ColumnSlot):
            if leaf.index not in binding.columns:
                raise IncompleteBindingError(f"c{leaf.index} is unbound")
            return ColumnName(binding.columns[leaf.index])
        if isinstance(leaf, ValueSlot):
            if leaf.index in template.open_slots:
                return OpenValue(leaf.index, _bound_column_name(template, binding, leaf.index))
            if leaf.index not in binding.values:
                raise IncompleteBindingError(f"val{leaf.index} is unbound")
            return Literal(binding.values[leaf.index][0])
        if isinstance(leaf, CellSlot):
            if leaf.index not in binding.values:
                raise IncompleteBindingError(f"val{leaf.index} is unbound")
            _, ref = binding.values[leaf.index]
            return CellSel(table.column_names[ref.col], table.row_label(ref.row))
        return leaf

    return transform(template.ast, repl)


def _bound_column_name(template: ProgramTemplate, binding: Binding,
                       idx: int) -> str | None:
    key = template.value_bindings.get(idx)
    if isinstance(key, int):
        return binding.columns.get(key)
    return key


def sample_program(template: ProgramTemplate, table: Table,
                   config: SamplerConfig, rng: random.Random) -> SampledProgram | None:
    """Sample, instantiate, execute, label.  Returns None when the table
    cannot host the template or every attempt was discarded.

    The target label is drawn once per call: retries re-draw bindings, not
    the label, so a template that cannot host the drawn label yields None
    instead of quietly emitting the opposite label (which would bend the
    corpus-wide label ratio)."""
    label = None
    if template.family == "logic":
        label = LABELS[0] if rng.random() < config.label_ratio else LABELS[1]
    for attempt in range(1, config.max_attempts_per_template + 1):
        try:
            binding = sample_binding(template, table, rng)
        except NoEligibleColumnsError:
            return None
        program = instantiate(template, binding, table)

        if template.family == "logic":
            try:
                if template.open_slots:
                    program, kinds = decide_claim_arg(program, table, label, rng)
                else:
                    kinds = []
                result = exec_program(program, table)
            except (ExecError, IncompleteBindingError):
                continue
            if result.boolean != (label == LABELS[0]):
                continue
            return SampledProgram(template, program, result, label, binding,
                                  kinds, attempt)

        try:
            result = exec_program(program, table)
        except ExecError:
            continue
        if result.is_empty:
            continue
        return SampledProgram(template, program, result, None, binding, [], attempt)
    return None
