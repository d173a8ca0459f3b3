"""Command-line interface: a thin client over the HTTP service.

Commands talk to the service API; by default the app is mounted
in-process, and ``--server URL`` points them at a remote instance
instead.  ``serve`` runs the service under uvicorn.
"""
from __future__ import annotations

import argparse
import asyncio
import json
import sys
from pathlib import Path

import httpx

from . import __version__
from .errors import ConfigError, TabsynthError
from .pipeline.config import config_to_obj, load_config
from .tables import load_table

_CLIENT_TIMEOUT = 600.0


class ServiceError(Exception):
    """A non-2xx response from the service."""


def _post(path: str, payload: dict, server: str | None) -> dict:
    async def go() -> dict:
        if server:
            async with httpx.AsyncClient(base_url=server,
                                         timeout=_CLIENT_TIMEOUT) as client:
                response = await client.post(path, json=payload)
                body = response.json()
        else:
            from .service.app import create_app
            transport = httpx.ASGITransport(app=create_app())
            async with httpx.AsyncClient(transport=transport,
                                         base_url="http://tabsynth",
                                         timeout=_CLIENT_TIMEOUT) as client:
                response = await client.post(path, json=payload)
                body = response.json()
        if response.status_code >= 400:
            detail = body.get("detail", body) if isinstance(body, dict) else body
            raise ServiceError(f"{detail}")
        return body

    return asyncio.run(go())


def _cmd_generate(args) -> int:
    cfg = load_config(args.config, seed=args.seed, jobs=args.jobs)
    stats = _post("/v1/generate", config_to_obj(cfg), args.server)
    json.dump(stats, sys.stdout, indent=2, sort_keys=True)
    print()
    return 0


def _cmd_validate(args) -> int:
    report = _post("/v1/validate", {"path": str(Path(args.corpus).resolve())},
                   args.server)
    if args.json:
        json.dump(report, sys.stdout, indent=2, sort_keys=True)
        print()
    else:
        for violation in report["violations"]:
            print(f"{violation['id']}: {violation['reason']}")
        state = "ok" if report["ok"] else f"{len(report['violations'])} violations"
        print(f"checked {report['total']} samples: {state}")
    return 0 if report["ok"] else 1


def _cmd_stats(args) -> int:
    stats = _post("/v1/stats", {"path": str(Path(args.corpus).resolve())},
                  args.server)
    if args.json:
        json.dump(stats, sys.stdout, indent=2, sort_keys=True)
        print()
        return 0
    print(f"samples: {stats['total']}   tables: {stats['tables']}")
    for name in ("by_task", "by_branch", "by_family", "by_label",
                 "by_answer_type"):
        counts = stats[name]
        if counts:
            pretty = ", ".join(f"{k}={v}" for k, v in sorted(counts.items()))
            print(f"{name[3:]}: {pretty}")
    print(f"distinct templates: {len(stats['by_template'])}")
    print(f"duplicate sentence rate: {stats['duplicate_sentence_rate']:.4f}")
    return 0


def _cmd_exec(args) -> int:
    path = Path(args.table)
    fmt = path.suffix.lower().lstrip(".")
    if fmt not in ("csv", "json"):
        raise ConfigError(f"table file must be .csv or .json: {path}")
    table = load_table(path.read_bytes(), fmt, table_id=path.stem)
    payload = {
        "table": table.to_json_obj(),
        "program": args.program,
        "family": args.family,
    }
    result = _post("/v1/exec", payload, args.server)
    if args.json:
        json.dump(result, sys.stdout, indent=2, sort_keys=True)
        print()
        return 0
    kind = result["kind"]
    if kind == "scalar":
        print(result["scalar"])
    elif kind == "cells":
        for cell in result["cells"]:
            print(cell)
    elif kind == "bool":
        print("true" if result["boolean"] else "false")
    else:
        print("(empty)")
    print(f"highlighted cells: {len(result['highlighted'])}", file=sys.stderr)
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service.app import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tabsynth",
        description="Synthesize tabular-reasoning questions and claims "
                    "from tables by sampling typed program templates.",
    )
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_server(p):
        p.add_argument("--server", metavar="URL", default=None,
                       help="send requests to a running service instead of "
                            "the in-process app")

    p = sub.add_parser("generate", help="generate a JSONL corpus from a config")
    p.add_argument("--config", required=True, help="TOML or JSON config file")
    p.add_argument("--seed", type=int, default=None,
                   help="override the config's seed")
    p.add_argument("--jobs", type=int, default=None, metavar="N",
                   help="parallel table workers (output is identical at any N)")
    add_server(p)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("validate",
                       help="re-execute every sample and report violations")
    p.add_argument("corpus", help="corpus .jsonl file")
    p.add_argument("--json", action="store_true", help="print the raw report")
    add_server(p)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("stats", help="corpus composition statistics")
    p.add_argument("corpus", help="corpus .jsonl file")
    p.add_argument("--json", action="store_true", help="print raw statistics")
    add_server(p)
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("exec", help="execute one program against one table")
    p.add_argument("--table", required=True, help="table .csv or .json file")
    p.add_argument("--program", required=True, help="program text")
    p.add_argument("--family", required=True, choices=("sql", "logic", "arith"))
    p.add_argument("--json", action="store_true", help="print the raw result")
    add_server(p)
    p.set_defaults(func=_cmd_exec)

    p = sub.add_parser("serve", help="run the HTTP service under uvicorn")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ServiceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TabsynthError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
