"""Label decision for fact-verification claims.

A sampled logic program arrives with undecided comparison targets
(OpenValue nodes).  Given a target label, this module fills each target so
the finished claim executes to exactly that label: Supported targets get
the true value, Refuted targets get a plausible wrong one (offset by 1,
10% or 25% for numbers, swapped within the bound column for text).  The
chosen perturbation kinds are reported for provenance.
"""
from __future__ import annotations

import random
from decimal import Decimal

from ..errors import CannotPerturbError
from ..programs.ast import Literal, LogicNode, OpenValue, transform
from ..tables import Table
from ..values import Empty, Number, Text, Value
from .logic import _col_index, eval_subexpression, exec_logic

_LABELS = ("Supported", "Refuted")
# offset_1 is unsafe once 1 falls inside the claim-root tolerance band
_OFFSET_1_CEILING = Decimal("1e8")


def _perturb_number(x: Decimal, rng: random.Random, sign: int | None,
                    kinds: list[str]) -> Decimal:
    candidates = [("offset_1", Decimal(1)),
                  ("offset_10pct", abs(x) * Decimal("0.1")),
                  ("offset_25pct", abs(x) * Decimal("0.25"))]
    if abs(x) >= _OFFSET_1_CEILING:
        candidates = candidates[1:]
    candidates = [(k, off) for k, off in candidates if off != 0]
    if not candidates:
        candidates = [("offset_1", Decimal(1))]
    kind, offset = candidates[rng.randrange(len(candidates))]
    if sign is None:
        sign = 1 if rng.random() < 0.5 else -1
    kinds.append(kind)
    return x + sign * offset


def _value_key(v: Value) -> tuple:
    return (v.kind.value, v.surface())


def _distinct_values(cells: list[Value]) -> list[Value]:
    """Distinct non-Empty values, sorted by surface for determinism."""
    seen: dict[tuple, Value] = {}
    for c in cells:
        if not isinstance(c, Empty):
            seen.setdefault(_value_key(c), c)
    return [seen[k] for k in sorted(seen)]


def _column_cells(table: Table, col_name: str) -> list[Value]:
    ci = table.column_index(col_name)
    if ci is None:
        return []
    return [row[ci] for row in table.rows]


def _wrong_value(truth: Value, column: str | None, table: Table,
                 rng: random.Random, kinds: list[str]) -> Value:
    """A plausible value different from truth (outside tolerance)."""
    if isinstance(truth, Number):
        return Number(_perturb_number(truth.magnitude, rng, None, kinds))
    if isinstance(truth, Text):
        if column is not None:
            domain = [v for v in _distinct_values(_column_cells(table, column))
                      if isinstance(v, Text) and v.text != truth.text]
            if domain:
                kinds.append("text_swap")
                return domain[rng.randrange(len(domain))]
        raise CannotPerturbError(f"no alternative text value for {truth.surface()!r}")
    raise CannotPerturbError("cannot perturb an empty value")


def _fill(node: LogicNode, index: int, value: Value) -> LogicNode:
    def repl(leaf):
        if isinstance(leaf, OpenValue) and leaf.index == index:
            return Literal(value)
        return leaf
    return transform(node, repl)


def _decide_comparison(node: LogicNode, table: Table, want: bool,
                       rng: random.Random, kinds: list[str]) -> LogicNode:
    left, right = node.args
    if not isinstance(right, OpenValue):
        return _check_closed(node, table, want)
    hl: set = set()
    truth = eval_subexpression(left, table, hl)
    if isinstance(truth, (list, bool)):
        raise CannotPerturbError("claim target is not a scalar")

    if node.op in ("eq", "not_eq"):
        want_equal = (node.op == "eq") == want
        if want_equal:
            if isinstance(truth, Empty):
                raise CannotPerturbError("cannot assert equality with an empty cell")
            kinds.append("exact")
            chosen = truth
        else:
            chosen = _wrong_value(truth, right.column, table, rng, kinds)
    else:  # greater / less
        if not isinstance(truth, Number):
            raise CannotPerturbError(f"{node.op} claim needs a numeric value")
        # greater holds iff truth > target, so a target below truth makes
        # it true; mirror for less
        below = (node.op == "greater") == want
        magnitude = _perturb_number(truth.magnitude, rng, -1 if below else 1, kinds)
        chosen = Number(magnitude)
    return _fill(node, right.index, chosen)


def _decide_membership(node: LogicNode, table: Table, want: bool,
                       rng: random.Random, kinds: list[str]) -> LogicNode:
    rows_node, col_arg, target = node.args
    if not isinstance(target, OpenValue):
        return _check_closed(node, table, want)
    hl: set = set()
    rows = eval_subexpression(rows_node, table, hl)
    if not isinstance(rows, list):
        raise CannotPerturbError(f"{node.op} needs a row set")
    if not rows:
        raise CannotPerturbError(f"{node.op} over zero rows")
    ci = _col_index(col_arg, table)
    cells = [table.rows[r][ci] for r in rows]
    counts: dict[tuple, int] = {}
    for c in cells:
        if not isinstance(c, Empty):
            counts[_value_key(c)] = counts.get(_value_key(c), 0) + 1
    in_rows = _distinct_values(cells)
    outside = [v for v in _distinct_values(_column_cells(table, col_arg.name))
               if _value_key(v) not in counts]

    def holds(v: Value) -> bool:
        n = counts.get(_value_key(v), 0)
        if node.op == "most_eq":
            return n * 2 > len(rows)
        if node.op == "all_eq":
            return n == len(rows)
        return n == 1

    candidates = [v for v in in_rows if holds(v) == want]
    if not want:
        candidates += [v for v in outside if holds(v) == want]
    if candidates:
        kinds.append("value_pick" if want else "counter_pick")
        chosen = candidates[rng.randrange(len(candidates))]
        return _fill(node, target.index, chosen)
    if want:
        raise CannotPerturbError(f"no value satisfies {node.op} here")
    # refuting with no in-table counterexample: perturb a present number
    numeric = [v for v in in_rows if isinstance(v, Number)]
    for v in numeric:
        probe_kinds: list[str] = []
        perturbed = Number(_perturb_number(v.magnitude, rng, None, probe_kinds))
        if not holds(perturbed):
            kinds.extend(probe_kinds)
            return _fill(node, target.index, perturbed)
    raise CannotPerturbError(f"no refuting value for {node.op} here")


def _check_closed(node: LogicNode, table: Table, want: bool) -> LogicNode:
    outcome = exec_logic(node, table)
    if outcome.boolean != want:
        raise CannotPerturbError("closed claim does not match the target label")
    return node


def _decide(node: LogicNode, table: Table, want: bool, rng: random.Random,
            kinds: list[str]) -> LogicNode:
    if node.op == "and":
        left, right = node.args
        if want:
            targets = (True, True)
        else:
            false_side = rng.randrange(2)
            targets = (false_side != 0, false_side != 1)
        return LogicNode("and", (
            _decide(left, table, targets[0], rng, kinds),
            _decide(right, table, targets[1], rng, kinds),
        ))
    if node.op in ("eq", "not_eq", "greater", "less"):
        return _decide_comparison(node, table, want, rng, kinds)
    if node.op in ("most_eq", "all_eq", "unique"):
        return _decide_membership(node, table, want, rng, kinds)
    return _check_closed(node, table, want)


def decide_claim_arg(program: LogicNode, table: Table, target_label: str,
                     rng: random.Random) -> tuple[LogicNode, list[str]]:
    """Close every claim target in program so it executes to target_label.
    Returns the closed program and the perturbation kinds used.  Raises
    CannotPerturbError (or another ExecError) when no such claim exists;
    callers treat that as a discarded attempt.
    """
    if target_label not in _LABELS:
        raise ValueError(f"target_label must be one of {_LABELS}")
    want = target_label == "Supported"
    kinds: list[str] = []
    closed = _decide(program, table, want, rng, kinds)
    outcome = exec_logic(closed, table)
    if outcome.boolean != want:
        raise CannotPerturbError("decided claim failed to close")
    return closed, kinds
