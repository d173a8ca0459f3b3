"""End-to-end corpus generation.

For every table, a fixed number of template slots is drawn; each slot
samples, instantiates, executes and realizes one program.  The enabled
branches then emit samples from that work:

- ``table_only``: the sentence with the full table and no paragraphs.
- ``split``: one evidence row is removed from the table and verbalized;
  the sample ships the reduced table plus the row sentence, while the
  answer stays the one computed on the full table (recorded in provenance
  as the execution context).
- ``expand``: a fresh row is first recovered from the table's paragraphs;
  programs are sampled against the expanded table, which the sample ships
  together with the original paragraphs.

Every branch draws from its own seed-derived random stream, so enabling a
branch never changes what the others emit, and per-table work can run in
parallel without changing a byte of output.
"""
from __future__ import annotations

import json
import os
import random
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import ConfigError, MalformedInputError
from ..programs.render import print_program
from ..programs.templates import ProgramTemplate, dedupe_templates, load_pack
from ..realize.external import ExternalRealizer, GeneratorEndpoint, realize_external
from ..realize.rules import Realization, realize_rule
from ..sampling import SampledProgram, sample_program
from ..seeding import derive_rng
from ..tables import Table, load_contexts, load_table
from ..hybrid import ExpandResult, table_to_text, text_to_table
from ..values import Number, Value
from .config import PipelineConfig
from .samples import BRANCHES, Sample, serialize_answer

_TABLE_SUFFIXES = (".csv", ".json")


@dataclass
class CorpusStats:
    total: int = 0
    tables: int = 0
    by_task: Counter = field(default_factory=Counter)
    by_branch: Counter = field(default_factory=Counter)
    by_family: Counter = field(default_factory=Counter)
    by_template: Counter = field(default_factory=Counter)
    by_label: Counter = field(default_factory=Counter)
    by_answer_type: Counter = field(default_factory=Counter)
    discards: Counter = field(default_factory=Counter)
    duplicate_sentence_rate: float = 0.0
    elapsed_s: float = 0.0

    def record(self, sample: Sample) -> None:
        self.total += 1
        self.by_task[sample.task] += 1
        self.by_branch[sample.provenance["branch"]] += 1
        self.by_family[sample.provenance["family"]] += 1
        self.by_template[sample.provenance["template"]] += 1
        if sample.task == "fv":
            self.by_label[sample.label] += 1
            self.by_answer_type["boolean"] += 1
        else:
            self.by_answer_type["cells" if isinstance(sample.answer, list)
                                else "scalar"] += 1

    def discard(self, reason: str) -> None:
        self.discards[reason] += 1

    def merge(self, other: "CorpusStats") -> None:
        self.total += other.total
        self.tables += other.tables
        for name in ("by_task", "by_branch", "by_family", "by_template",
                     "by_label", "by_answer_type", "discards"):
            getattr(self, name).update(getattr(other, name))

    def to_json_obj(self) -> dict:
        obj = {"total": self.total, "tables": self.tables}
        for name in ("by_task", "by_branch", "by_family", "by_template",
                     "by_label", "by_answer_type", "discards"):
            obj[name] = dict(sorted(getattr(self, name).items()))
        obj["duplicate_sentence_rate"] = round(self.duplicate_sentence_rate, 6)
        obj["elapsed_s"] = round(self.elapsed_s, 3)
        return obj


def load_tables(path: Path) -> list[Table]:
    """Load one table file, or every .csv/.json under a directory.

    The table id is the file stem; directory loads are ordered by id so
    runs are reproducible regardless of filesystem enumeration order.
    """
    path = Path(path)
    if path.is_dir():
        files = sorted((p for p in path.iterdir()
                        if p.is_file() and p.suffix.lower() in _TABLE_SUFFIXES),
                       key=lambda p: p.name)
        if not files:
            raise ConfigError(f"no .csv or .json tables under {path}")
        tables = []
        seen = set()
        for f in files:
            if f.stem in seen:
                raise MalformedInputError(
                    f"duplicate table id {f.stem!r} under {path}")
            seen.add(f.stem)
            tables.append(load_table(f.read_bytes(), f.suffix.lower()[1:],
                                     table_id=f.stem))
        return tables
    if not path.is_file():
        raise ConfigError(f"tables path {path} does not exist")
    if path.suffix.lower() not in _TABLE_SUFFIXES:
        raise ConfigError(f"table file must be .csv or .json: {path}")
    return [load_table(path.read_bytes(), path.suffix.lower()[1:],
                       table_id=path.stem)]


_REALIZERS: dict[GeneratorEndpoint, ExternalRealizer] = {}


def _realize(program, endpoint: GeneratorEndpoint | None) -> Realization:
    if endpoint is None:
        return realize_rule(program)
    realizer = _REALIZERS.get(endpoint)
    if realizer is None:
        realizer = _REALIZERS[endpoint] = ExternalRealizer(endpoint)
    return realize_external(program, realizer)


def _draw_template(templates: list[ProgramTemplate], weights: list[float],
                   rng: random.Random) -> ProgramTemplate:
    return rng.choices(templates, weights=weights, k=1)[0]


def _raw_or_surface(value: Value) -> str:
    if isinstance(value, Number) and value.raw:
        return value.raw
    return value.surface()


def _provenance(table: Table, sp: SampledProgram, realization: Realization,
                branch: str, slot: int, seed: int) -> dict:
    prov = {
        "table_id": table.id,
        "family": sp.template.family,
        "template": sp.template.key,
        "program": print_program(sp.program),
        "branch": branch,
        "seed": seed,
        "slot": slot,
        "source": realization.source,
        "label_col": table.label_col,
        "binding": {
            "columns": {str(i): name
                        for i, name in sorted(sp.binding.columns.items())},
            "values": {str(i): {"value": v.surface(), "row": ref.row,
                                "col": ref.col}
                       for i, (v, ref) in sorted(sp.binding.values.items())},
        },
        "highlighted": sorted([c.row, c.col] for c in sp.result.highlighted),
        "attempts": sp.attempts,
    }
    if sp.perturbations:
        prov["perturbations"] = list(sp.perturbations)
    return prov


def generate_for_table(table: Table, paragraphs: list[str],
                       templates: list[ProgramTemplate],
                       cfg: PipelineConfig) -> tuple[list[str], CorpusStats]:
    """Produce every sample line for one table (deterministic in cfg+table)."""
    stats = CorpusStats(tables=1)
    eligible = [t for t in templates if t.task in cfg.tasks]
    weights = [t.weight for t in eligible]
    seed = cfg.sampler.seed
    base_on = "table_only" in cfg.branches or "split" in cfg.branches

    expansion: ExpandResult | None = None
    if "expand" in cfg.branches:
        expansion = text_to_table(table, paragraphs) if paragraphs else None
        if expansion is None:
            stats.discard("expand_unavailable")

    lines: list[str] = []
    counters = dict.fromkeys(BRANCHES, 0)

    def emit(branch: str, sp: SampledProgram, realization: Realization,
             evidence: Table, paras: list[str], slot: int,
             extra: dict | None = None) -> None:
        prov = _provenance(table if branch != "expand" else expansion.table,
                           sp, realization, branch, slot, seed)
        if extra:
            prov.update(extra)
        sample = Sample(
            id=f"{table.id}-{branch}-{counters[branch]}",
            task=sp.template.task,
            sentence=realization.text,
            table=evidence,
            paragraphs=paras,
            answer=serialize_answer(sp.result) if sp.template.task == "qa" else None,
            label=sp.label,
            provenance=prov,
        )
        counters[branch] += 1
        stats.record(sample)
        lines.append(sample.to_json_line())

    for slot in range(cfg.samples_per_table):
        if base_on:
            tpl = _draw_template(eligible, weights,
                                 derive_rng(seed, table.id, slot, "template"))
            sp = sample_program(tpl, table, cfg.sampler,
                                derive_rng(seed, table.id, slot, "base"))
            if sp is None:
                stats.discard("sampling")
            else:
                realization = _realize(sp.program, cfg.endpoint)
                if not realization.fidelity_ok:
                    stats.discard("fidelity")
                else:
                    if "table_only" in cfg.branches:
                        emit("table_only", sp, realization, table, [], slot)
                    if "split" in cfg.branches:
                        sr = table_to_text(table, sp.result,
                                           derive_rng(seed, table.id, slot, "split"))
                        if sr is None:
                            stats.discard("split_unavailable")
                        else:
                            emit("split", sp, realization, sr.table,
                                 [sr.sentence], slot, extra={"split": {
                                     "context_table":
                                         table.to_json_obj(include_id=False),
                                     "removed_row": sr.removed_row,
                                     "anchor": [sr.anchor.row, sr.anchor.col],
                                 }})

        if expansion is not None:
            tpl = _draw_template(eligible, weights,
                                 derive_rng(seed, table.id, slot, "template_expand"))
            sp = sample_program(tpl, expansion.table, cfg.sampler,
                                derive_rng(seed, table.id, slot, "expand"))
            if sp is None:
                stats.discard("sampling")
            else:
                realization = _realize(sp.program, cfg.endpoint)
                if not realization.fidelity_ok:
                    stats.discard("fidelity")
                else:
                    emit("expand", sp, realization, expansion.table,
                         list(paragraphs), slot, extra={"expand": {
                             "paragraph": expansion.paragraph_index,
                             "row": expansion.row_index,
                             "label": expansion.label.surface(),
                             "extracted": {
                                 col: _raw_or_surface(v)
                                 for col, v in expansion.extracted.items()},
                         }})
    return lines, stats


def _table_worker(payload) -> tuple[list[str], CorpusStats]:
    table, paragraphs, templates, cfg = payload
    return generate_for_table(table, paragraphs, templates, cfg)


def generate(cfg: PipelineConfig) -> CorpusStats:
    """Run the full pipeline and write the corpus JSONL atomically."""
    started = time.monotonic()
    tables = load_tables(cfg.tables)
    contexts = (load_contexts(Path(cfg.contexts).read_bytes())
                if cfg.contexts is not None else {})
    templates = dedupe_templates(
        load_pack(Path(cfg.templates).read_text(encoding="utf-8"),
                  origin=str(cfg.templates)))
    if not any(t.task in cfg.tasks for t in templates):
        raise ConfigError(
            f"template pack {cfg.templates} has no templates for tasks {cfg.tasks}")

    payloads = [(table,
                 list(contexts[table.id].paragraphs) if table.id in contexts else [],
                 templates, cfg)
                for table in tables]
    if cfg.jobs == 1:
        results = [_table_worker(p) for p in payloads]
    else:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_table_worker, payloads, chunksize=1))

    stats = CorpusStats()
    lines: list[str] = []
    for table_lines, table_stats in results:
        lines.extend(table_lines)
        stats.merge(table_stats)

    if stats.total:
        sentences = {json.loads(line)["sentence"] for line in lines}
        stats.duplicate_sentence_rate = 1.0 - len(sentences) / stats.total

    output = Path(cfg.output)
    output.parent.mkdir(parents=True, exist_ok=True)
    tmp = output.with_name(output.name + ".tmp")
    tmp.write_bytes("".join(lines).encode("utf-8"))
    os.replace(tmp, output)

    stats.elapsed_s = time.monotonic() - started
    return stats
