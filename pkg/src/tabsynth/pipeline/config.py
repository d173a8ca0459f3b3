"""Run configuration: what to read, what to emit, and how to sample.

Configs are flat TOML or JSON files; relative paths inside a config are
resolved against the config file's directory.  The same key set is
accepted by the service's generate endpoint (resolved against the server's
working directory there).
"""
from __future__ import annotations

import json
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from ..errors import ConfigError
from ..realize.external import GeneratorEndpoint
from ..sampling import SamplerConfig
from .samples import BRANCHES, TASKS

_TOP_KEYS = frozenset({
    "tables", "contexts", "templates", "output", "tasks", "branches",
    "samples_per_table", "seed", "label_ratio", "max_attempts_per_template",
    "realizer", "jobs",
})
_REALIZER_KEYS = frozenset({
    "transport", "address", "timeout_ms", "max_retries", "max_inflight",
})


@dataclass
class PipelineConfig:
    tables: Path
    templates: Path
    output: Path
    contexts: Path | None = None
    tasks: tuple[str, ...] = ("qa", "fv")
    branches: tuple[str, ...] = ("table_only",)
    samples_per_table: int = 10
    sampler: SamplerConfig = field(default_factory=SamplerConfig)
    endpoint: GeneratorEndpoint | None = None
    jobs: int = 1

    def __post_init__(self):
        self.tasks = tuple(self.tasks)
        self.branches = tuple(self.branches)
        if not self.tasks:
            raise ConfigError("at least one task must be enabled")
        for t in self.tasks:
            if t not in TASKS:
                raise ConfigError(f"unknown task {t!r} (choose from {TASKS})")
        if not self.branches:
            raise ConfigError("at least one branch must be enabled")
        for b in self.branches:
            if b not in BRANCHES:
                raise ConfigError(f"unknown branch {b!r} (choose from {BRANCHES})")
        if len(set(self.tasks)) != len(self.tasks):
            raise ConfigError("duplicate task")
        if len(set(self.branches)) != len(self.branches):
            raise ConfigError("duplicate branch")
        if self.samples_per_table < 1:
            raise ConfigError("samples_per_table must be >= 1")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")


def config_from_obj(obj: dict, base_dir: Path) -> PipelineConfig:
    """Build a config from a parsed TOML/JSON mapping."""
    if not isinstance(obj, dict):
        raise ConfigError("config must be a mapping")
    unknown = sorted(set(obj) - _TOP_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    for key in ("tables", "templates", "output"):
        if key not in obj:
            raise ConfigError(f"config is missing required key {key!r}")

    def path_of(key):
        raw = obj.get(key)
        if raw is None:
            return None
        if not isinstance(raw, str) or not raw:
            raise ConfigError(f"{key} must be a non-empty path string")
        return (base_dir / raw).resolve()

    endpoint = None
    if obj.get("realizer") is not None:
        body = obj["realizer"]
        if not isinstance(body, dict):
            raise ConfigError("realizer must be a mapping")
        unknown = sorted(set(body) - _REALIZER_KEYS)
        if unknown:
            raise ConfigError(f"unknown realizer keys: {', '.join(unknown)}")
        try:
            endpoint = GeneratorEndpoint(**body)
        except TypeError as exc:
            raise ConfigError(f"bad realizer config: {exc}") from exc

    try:
        sampler = SamplerConfig(
            seed=int(obj.get("seed", 0)),
            max_attempts_per_template=int(obj.get("max_attempts_per_template", 20)),
            label_ratio=float(obj.get("label_ratio", 0.5)),
        )
        return PipelineConfig(
            tables=path_of("tables"),
            templates=path_of("templates"),
            output=path_of("output"),
            contexts=path_of("contexts"),
            tasks=tuple(obj.get("tasks", TASKS)),
            branches=tuple(obj.get("branches", ("table_only",))),
            samples_per_table=int(obj.get("samples_per_table", 10)),
            sampler=sampler,
            endpoint=endpoint,
            jobs=int(obj.get("jobs", 1)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad config value: {exc}") from exc


def config_to_obj(cfg: PipelineConfig) -> dict:
    """Flatten a config back to the mapping form (absolute paths)."""
    obj = {
        "tables": str(cfg.tables),
        "templates": str(cfg.templates),
        "output": str(cfg.output),
        "tasks": list(cfg.tasks),
        "branches": list(cfg.branches),
        "samples_per_table": cfg.samples_per_table,
        "seed": cfg.sampler.seed,
        "label_ratio": cfg.sampler.label_ratio,
        "max_attempts_per_template": cfg.sampler.max_attempts_per_template,
        "jobs": cfg.jobs,
    }
    if cfg.contexts is not None:
        obj["contexts"] = str(cfg.contexts)
    if cfg.endpoint is not None:
        obj["realizer"] = {
            "transport": cfg.endpoint.transport,
            "address": cfg.endpoint.address,
            "timeout_ms": cfg.endpoint.timeout_ms,
            "max_retries": cfg.endpoint.max_retries,
            "max_inflight": cfg.endpoint.max_inflight,
        }
    return obj


def load_config(path: str | Path, seed: int | None = None,
                jobs: int | None = None) -> PipelineConfig:
    """Load a TOML (.toml) or JSON config file, with optional overrides."""
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if path.suffix.lower() == ".toml":
        try:
            obj = tomllib.loads(data.decode("utf-8"))
        except (tomllib.TOMLDecodeError, UnicodeDecodeError) as exc:
            raise ConfigError(f"{path}: {exc}") from exc
    elif path.suffix.lower() == ".json":
        try:
            obj = json.loads(data)
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise ConfigError(f"{path}: {exc}") from exc
    else:
        raise ConfigError(f"config must be .toml or .json, got {path.name!r}")
    cfg = config_from_obj(obj, path.resolve().parent)
    if seed is not None:
        cfg.sampler = replace(cfg.sampler, seed=seed)
    if jobs is not None:
        cfg = replace(cfg, jobs=jobs)
    return cfg
