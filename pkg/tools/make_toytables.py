#!/usr/bin/env python3
"""Regenerate the bundled toy tables and their context paragraphs.

The tables are committed; this script exists so they can be rebuilt or
extended reproducibly.  Running it twice writes identical bytes.

Every table is shaped so each claim operator can be made both true and
false on it: row labels are unique proper names, every numeric column has
a duplicated value and a singleton, one categorical column has a strict
majority value, and one numeric column is constant.
"""
from __future__ import annotations

import csv
import io
import json
import random
from pathlib import Path

OUT_DIR = Path(__file__).resolve().parent.parent / "src" / "tabsynth" / "assets" / "toytables"
CONTEXTS_PATH = OUT_DIR.parent / "toytables_contexts.json"
N_TABLES = 50
SEED = 20240501

NAMES = [
    "Alba", "Boreal", "Corvus", "Danub", "Elbrus", "Fenwick", "Garnet",
    "Halden", "Ivory", "Jasper", "Kestrel", "Lumen", "Maren", "Norwind",
    "Opaline", "Pinnacle", "Quarry", "Rowan", "Selene", "Tindra", "Umber",
    "Vantage", "Wexford", "Yarrow", "Zephyr", "Arlon", "Bastogne", "Calder",
    "Delmare", "Everly", "Farrow", "Glenholm", "Harrier", "Ines", "Juniper",
    "Kolwez", "Lorient", "Mistral", "Noventa", "Osprey",
]
FRESH_NAMES = [
    "Sagitta", "Torrens", "Ulveden", "Vireo", "Wrenfield", "Xanten",
    "Ystad", "Zalenko", "Ambergris", "Brightholm", "Caspian", "Drumlin",
]
LABEL_COLS = ["team", "club", "city", "school", "station", "product"]
NUM_COLS = ["points", "wins", "goals", "budget", "score", "laps", "tons",
            "visitors", "chairs", "medals won"]
CAT_COLS = [
    ("medal", ["gold", "silver", "bronze"]),
    ("zone", ["north", "south", "east"]),
    ("status", ["active", "reserve", "closed"]),
    ("group", ["red", "blue", "green"]),
]
CONST_COLS = [("season", ["2018", "2019", "2020", "2021"]),
              ("grade", ["1", "2", "3", "4", "5"])]

PARAGRAPH_SHAPES = [
    "{name} arrived mid-series and recorded {c1} of {v1} and {c2} of {v2}.",
    "Founded only recently, {name} posted {c1} of {v1} while holding {c2} at {v2}.",
    "Observers noted that {name} closed the stretch with {c1} of {v1}, plus {c2} of {v2}.",
    "{name} entered late, yet its {c1} of {v1} and {c2} of {v2} drew attention.",
]
DECOYS = [
    "The season was followed closely across the region.",
    "Most coverage focused on the closing weeks of the campaign.",
    "Attendance figures were described as steady throughout.",
]


def numeric_values(rng: random.Random, n: int, decimals: bool,
                   grouped: bool) -> list[str]:
    """n values with at least one duplicated value and one singleton."""
    if grouped:
        pool = rng.sample(range(1_100, 9_900), n - 1)
        values = pool + [pool[0]]
        rng.shuffle(values)
        return [f"{v:,}" for v in values]
    pool = rng.sample(range(3, 240), n - 1)
    if decimals:
        rendered = [f"{v}.{rng.choice(['25', '5', '75'])}" for v in pool]
    else:
        rendered = [str(v) for v in pool]
    values = rendered + [rendered[0]]
    rng.shuffle(values)
    return values


def categorical_values(rng: random.Random, n: int, options: list[str]) -> list[str]:
    majority = n // 2 + 1
    values = [options[0]] * majority
    for i in range(n - majority):
        values.append(options[1 + i % (len(options) - 1)])
    rng.shuffle(values)
    return values


def make_table(rng: random.Random, index: int
               ) -> tuple[str, list[str], list[list[str]], list[str]]:
    table_id = f"toy{index:02d}"
    n_rows = rng.choice([5, 6, 7, 8])
    label_name = rng.choice(LABEL_COLS)
    labels = rng.sample(NAMES, n_rows)
    num1, num2 = rng.sample(NUM_COLS, 2)
    cat_name, cat_options = rng.choice(CAT_COLS)
    const_name, const_options = rng.choice(CONST_COLS)

    columns = [
        (num1, numeric_values(rng, n_rows, decimals=False,
                              grouped=(num1 == "visitors"))),
        (num2, numeric_values(rng, n_rows, decimals=rng.random() < 0.5,
                              grouped=(num2 == "visitors"))),
        (cat_name, categorical_values(rng, n_rows, list(cat_options))),
        (const_name, [rng.choice(const_options)] * n_rows),
    ]
    rng.shuffle(columns)
    header = [label_name] + [name for name, _ in columns]
    rows = [[labels[r]] + [vals[r] for _, vals in columns]
            for r in range(n_rows)]
    return table_id, header, rows, [num1, num2]


def make_context(rng: random.Random, numeric_cols: list[str]) -> list[str]:
    # Only the two varying numeric columns: touching the constant column
    # would break its all-equal shape on expanded tables.
    c1, c2 = rng.sample(numeric_cols, 2)
    name = rng.choice(FRESH_NAMES)
    v1, v2 = rng.randint(3, 260), rng.randint(3, 260)
    body = rng.choice(PARAGRAPH_SHAPES).format(name=name, c1=c1, v1=v1,
                                               c2=c2, v2=v2)
    if rng.random() < 0.4:
        return [rng.choice(DECOYS), body]
    return [body]


def main() -> None:
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    rng = random.Random(SEED)
    contexts: dict[str, list[str]] = {}
    for index in range(N_TABLES):
        table_id, header, rows, numeric_cols = make_table(rng, index)
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        (OUT_DIR / f"{table_id}.csv").write_text(buffer.getvalue(),
                                                 encoding="utf-8")
        if index % 8 != 7:  # a few tables stay without context on purpose
            contexts[table_id] = make_context(rng, numeric_cols)
    CONTEXTS_PATH.write_text(
        json.dumps(contexts, indent=1, ensure_ascii=False) + "\n",
        encoding="utf-8")
    print(f"wrote {N_TABLES} tables to {OUT_DIR} and "
          f"{len(contexts)} contexts to {CONTEXTS_PATH}")


if __name__ == "__main__":
    main()
