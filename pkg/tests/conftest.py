"""Shared fixtures: bundled assets and a small generated corpus."""
from __future__ import annotations

import sys
from pathlib import Path
from types import SimpleNamespace

import pytest

TESTS_DIR = Path(__file__).resolve().parent
if str(TESTS_DIR) not in sys.path:
    sys.path.insert(0, str(TESTS_DIR))

import tabsynth  # noqa: E402
from tabsynth.pipeline import generate, load_config  # noqa: E402
from tabsynth.programs.templates import dedupe_templates, load_pack  # noqa: E402
from tabsynth.tables import load_table  # noqa: E402

ASSETS = Path(tabsynth.__file__).resolve().parent / "assets"


@pytest.fixture(scope="session")
def assets_dir() -> Path:
    return ASSETS


@pytest.fixture(scope="session")
def toy_table():
    path = ASSETS / "toy_table.csv"
    return load_table(path.read_bytes(), "csv", table_id=path.stem)


@pytest.fixture(scope="session")
def starter_templates():
    text = (ASSETS / "templates" / "starter.txt").read_text(encoding="utf-8")
    return dedupe_templates(load_pack(text, origin="starter.txt"))


def write_config(path: Path, output: Path, **overrides) -> Path:
    """Write a JSON pipeline config pointing at the bundled assets."""
    import json

    obj = {
        "tables": str(ASSETS / "toytables"),
        "contexts": str(ASSETS / "toytables_contexts.json"),
        "templates": str(ASSETS / "templates" / "starter.txt"),
        "output": str(output),
        "tasks": ["qa", "fv"],
        "branches": ["table_only", "split", "expand"],
        "samples_per_table": 12,
        "seed": 0,
    }
    obj.update(overrides)
    path.write_text(json.dumps(obj, indent=2), encoding="utf-8")
    return path


@pytest.fixture(scope="session")
def corpus_run(tmp_path_factory):
    """One full-featured generation run, shared by read-only tests."""
    root = tmp_path_factory.mktemp("corpus")
    output = root / "corpus.jsonl"
    cfg_path = write_config(root / "run.json", output)
    cfg = load_config(cfg_path)
    stats = generate(cfg)
    return SimpleNamespace(path=output, stats=stats, cfg=cfg, cfg_path=cfg_path)
