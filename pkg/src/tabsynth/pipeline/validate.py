"""Corpus re-checking: every line must earn its answer back.

Each sample's provenance program is re-parsed and re-executed against the
sample's execution context (the shipped table, or the recorded full table
for split samples).  Question answers must reproduce exactly; claim labels
must match the boolean the program yields; the sentence must still pass
the surface-fidelity gate.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import TabsynthError
from ..execution import exec_program
from ..execution.result import BOOL
from ..programs.parse import parse_program
from ..realize.rules import check_fidelity
from .samples import BRANCHES, Sample, serialize_answer, table_from_obj


@dataclass(frozen=True)
class Violation:
    sample_id: str
    reason: str


@dataclass
class Report:
    total: int = 0
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json_obj(self) -> dict:
        return {
            "total": self.total,
            "ok": self.ok,
            "violations": [{"id": v.sample_id, "reason": v.reason}
                           for v in self.violations],
        }


def _check_sample(sample: Sample) -> str | None:
    """Return a violation reason, or None when the sample holds up."""
    prov = sample.provenance
    for key in ("family", "program", "branch", "table_id"):
        if key not in prov:
            return f"provenance is missing {key!r}"
    if prov["branch"] not in BRANCHES:
        return f"unknown branch {prov['branch']!r}"

    if "split" in prov:
        context = prov["split"]
        if not isinstance(context, dict) or "context_table" not in context:
            return "split sample lacks its execution table"
        exec_table = table_from_obj(context["context_table"],
                                    str(prov["table_id"]))
    else:
        exec_table = sample.table

    program = parse_program(prov["program"], prov["family"])
    result = exec_program(program, exec_table)

    if sample.task == "fv":
        if result.kind != BOOL:
            return f"claim program produced {result.kind}, not a boolean"
        if result.boolean != (sample.label == "Supported"):
            return f"label {sample.label} contradicts re-execution"
    else:
        if result.kind == BOOL or result.is_empty:
            return f"question program produced {result.kind}"
        if serialize_answer(result) != sample.answer:
            return "answer does not reproduce under re-execution"

    if not check_fidelity(program, sample.sentence):
        return "sentence fails the surface-fidelity gate"
    return None


def validate_corpus(path: str | Path) -> Report:
    report = Report()
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                report.violations.append(
                    Violation(f"line {lineno}", "blank line"))
                continue
            report.total += 1
            sample_id = f"line {lineno}"
            try:
                obj = json.loads(line)
                if isinstance(obj, dict) and "id" in obj:
                    sample_id = str(obj["id"])
                sample = Sample.from_json_obj(obj)
                reason = _check_sample(sample)
            except json.JSONDecodeError as exc:
                reason = f"invalid JSON: {exc}"
            except (TabsynthError, ValueError, KeyError, TypeError) as exc:
                reason = f"{type(exc).__name__}: {exc}"
            if reason is not None:
                report.violations.append(Violation(sample_id, reason))
    return report
