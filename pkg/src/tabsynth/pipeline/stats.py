"""Corpus statistics recomputed by streaming the JSONL file.

Discard reasons are a property of a generation run, not of its surviving
samples, so the histogram here is always empty; `generate` returns the
populated one.
"""
from __future__ import annotations

import json
import time
from pathlib import Path

from ..errors import MalformedInputError
from .generate import CorpusStats


def stats_corpus(path: str | Path) -> CorpusStats:
    stats = CorpusStats()
    sentences: set[str] = set()
    table_ids: set[str] = set()
    started = time.monotonic()
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                task = obj["task"]
                prov = obj["provenance"]
                stats.total += 1
                stats.by_task[task] += 1
                stats.by_branch[prov["branch"]] += 1
                stats.by_family[prov["family"]] += 1
                stats.by_template[prov["template"]] += 1
                if task == "fv":
                    stats.by_label[obj["label"]] += 1
                    stats.by_answer_type["boolean"] += 1
                else:
                    stats.by_answer_type[
                        "cells" if isinstance(obj["answer"], list)
                        else "scalar"] += 1
                sentences.add(obj["sentence"])
                table_ids.add(str(prov["table_id"]))
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise MalformedInputError(
                    f"{path}:{lineno}: bad sample line: {exc}") from exc
    stats.tables = len(table_ids)
    if stats.total:
        stats.duplicate_sentence_rate = 1.0 - len(sentences) / stats.total
    stats.elapsed_s = time.monotonic() - started
    return stats
