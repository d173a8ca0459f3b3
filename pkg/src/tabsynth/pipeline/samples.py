"""The emitted training instance and its JSONL wire form.

One sample per line: ``{"id", "task", "sentence", "table": {"header",
"rows"}, "paragraphs": [...], "answer" | "label", "provenance": {...}}``,
UTF-8, newline terminated.  Answers are stored in surface form (a string
for scalars, a list of strings for cell lists) so a line round-trips
without loss and can be checked by re-executing the provenance program.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from ..errors import MalformedInputError
from ..execution.result import CELLS, SCALAR, ExecResult
from ..tables import Table

TASKS = ("qa", "fv")
BRANCHES = ("table_only", "split", "expand")
LABELS = ("Supported", "Refuted")


def serialize_answer(result: ExecResult) -> str | list[str]:
    """Surface form of a question's denotation."""
    if result.kind == SCALAR:
        return result.scalar.surface()
    if result.kind == CELLS:
        return [v.surface() for v in result.cells]
    raise ValueError(f"result kind {result.kind!r} is not an answer")


@dataclass
class Sample:
    id: str
    task: str                 # qa | fv
    sentence: str
    table: Table              # the evidence table shipped with the sample
    paragraphs: list[str] = field(default_factory=list)
    answer: str | list[str] | None = None   # qa only, surface form
    label: str | None = None                # fv only
    provenance: dict = field(default_factory=dict)

    def to_json_obj(self) -> dict:
        obj = {
            "id": self.id,
            "task": self.task,
            "sentence": self.sentence,
            "table": self.table.to_json_obj(include_id=False),
            "paragraphs": list(self.paragraphs),
        }
        if self.task == "qa":
            obj["answer"] = self.answer
        else:
            obj["label"] = self.label
        obj["provenance"] = self.provenance
        return obj

    def to_json_line(self) -> str:
        return json.dumps(self.to_json_obj(), ensure_ascii=False,
                          separators=(",", ":")) + "\n"

    @classmethod
    def from_json_obj(cls, obj: dict) -> "Sample":
        if not isinstance(obj, dict):
            raise MalformedInputError("sample must be a JSON object")
        try:
            sample_id = obj["id"]
            task = obj["task"]
            sentence = obj["sentence"]
            table_obj = obj["table"]
            paragraphs = obj["paragraphs"]
            provenance = obj["provenance"]
        except KeyError as exc:
            raise MalformedInputError(f"sample is missing field {exc}") from exc
        if task not in TASKS:
            raise MalformedInputError(f"unknown task {task!r}")
        if task == "qa":
            answer, label = obj.get("answer"), None
            if not isinstance(answer, (str, list)):
                raise MalformedInputError("qa sample needs a string or list answer")
        else:
            answer, label = None, obj.get("label")
            if label not in LABELS:
                raise MalformedInputError(f"fv sample has bad label {label!r}")
        if not isinstance(paragraphs, list) or not all(
                isinstance(p, str) for p in paragraphs):
            raise MalformedInputError("paragraphs must be a list of strings")
        if not isinstance(provenance, dict):
            raise MalformedInputError("provenance must be an object")
        table = table_from_obj(table_obj, str(provenance.get("table_id", sample_id)))
        return cls(str(sample_id), task, str(sentence), table,
                   list(paragraphs), answer, label, provenance)


def table_from_obj(obj: dict, table_id: str) -> Table:
    """Rebuild a table from its serialized {header, rows[, label_col]} form."""
    if not isinstance(obj, dict) or "header" not in obj or "rows" not in obj:
        raise MalformedInputError("table must be an object with header and rows")
    return Table.from_strings(table_id, obj["header"], obj["rows"],
                              label_col=int(obj.get("label_col", 0)))
