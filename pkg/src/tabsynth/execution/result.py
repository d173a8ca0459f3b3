"""Execution results: a typed payload plus highlight provenance.

highlighted is the set of cells the evaluator examined; mutating any cell
outside it cannot change the payload.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..tables import CellRef
from ..values import Value

SCALAR, CELLS, BOOL, EMPTY = "scalar", "cells", "bool", "empty"


@dataclass(frozen=True)
class ExecResult:
    kind: str
    scalar: Value | None = None
    cells: tuple[Value, ...] | None = None
    boolean: bool | None = None
    highlighted: frozenset = field(default_factory=frozenset)

    @classmethod
    def of_scalar(cls, value: Value, hl) -> "ExecResult":
        return cls(SCALAR, scalar=value, highlighted=frozenset(hl))

    @classmethod
    def of_cells(cls, values, hl) -> "ExecResult":
        return cls(CELLS, cells=tuple(values), highlighted=frozenset(hl))

    @classmethod
    def of_bool(cls, value: bool, hl) -> "ExecResult":
        return cls(BOOL, boolean=value, highlighted=frozenset(hl))

    @classmethod
    def of_empty(cls, hl) -> "ExecResult":
        return cls(EMPTY, highlighted=frozenset(hl))

    def payload(self):
        """Comparable payload without highlight provenance."""
        if self.kind == SCALAR:
            return (SCALAR, self.scalar)
        if self.kind == CELLS:
            return (CELLS, self.cells)
        if self.kind == BOOL:
            return (BOOL, self.boolean)
        return (EMPTY,)

    @property
    def is_empty(self) -> bool:
        return self.kind == EMPTY
