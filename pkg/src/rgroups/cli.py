"""Thin command-line client for the analysis service.

By default every subcommand calls the service layer in-process, which keeps
runs reproducible and fast; --server switches the data-path commands to a
running HTTP instance of the same service.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from . import service
from .datum import parse_instance
from .errors import (
    CapExceeded,
    InstanceSyntaxError,
    RGroupsError,
    SchemaError,
    UnknownExample,
    ValidationError,
)

EXIT_OK = 0
EXIT_OTHER = 1
EXIT_VALIDATION = 2
EXIT_MISMATCH = 3
EXIT_CAP = 4


def _json_dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit_report(report: service.AnalysisReportModel, fmt: str) -> None:
    if fmt == "json":
        sys.stdout.write(_json_dumps(report.model_dump(by_alias=True)))
    else:
        sys.stdout.write(service.render_text(report))


def _load_datum(path: str):
    with open(path, "r", encoding="utf-8") as handle:
        return parse_instance(handle.read())


def _post(server: str, route: str, payload: dict) -> dict:
    import httpx

    response = httpx.post(server.rstrip("/") + route, json=payload, timeout=600.0)
    response.raise_for_status()
    return response.json()


def cmd_analyze(args: argparse.Namespace) -> int:
    if args.server:
        with open(args.path, "r", encoding="utf-8") as handle:
            doc = json.load(handle)
        payload = {"instance": doc, "oracle": args.oracle}
        report = service.AnalysisReportModel.model_validate(
            _post(args.server, "/analyze", payload)
        )
    else:
        datum = _load_datum(args.path)
        report = service.analyze(datum, with_oracle=args.oracle)
    _emit_report(report, args.format)
    if report.oracle is not None and not report.oracle.passed:
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_example(args: argparse.Namespace) -> int:
    if args.dump:
        sys.stdout.write(
            _json_dumps(service.example_instance(args.name).to_doc())
        )
        return EXIT_OK
    report = service.example_report(args.name, with_oracle=args.oracle)
    _emit_report(report, args.format)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    if args.server:
        with open(args.path, "r", encoding="utf-8") as handle:
            doc = json.load(handle)
        response = service.VerifyResponse.model_validate(
            _post(args.server, "/verify", {"instance": doc})
        )
    else:
        datum = _load_datum(args.path)
        response = service.verify(datum)
    sys.stdout.write(_json_dumps(response.model_dump()))
    return EXIT_OK if response.passed else EXIT_MISMATCH


def _write_records(records, out: Optional[str]) -> None:
    lines = [
        json.dumps(rec.model_dump(by_alias=True), sort_keys=True) for rec in records
    ]
    text = "\n".join(lines) + ("\n" if lines else "")
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def cmd_fuzz(args: argparse.Namespace) -> int:
    request = service.FuzzRequest(
        families=args.family,
        r_min=args.min_r,
        r_max=args.max_r,
        gamma_rank_max=args.gamma_rank,
        count=args.count,
        seed=args.seed,
        jobs=args.jobs,
    )
    if args.server:
        response = service.FuzzResponse.model_validate(
            _post(args.server, "/fuzz", request.model_dump())
        )
    else:
        response = service.fuzz_run(request)
    _write_records(response.records, args.out)
    sys.stdout.write(_json_dumps(response.summary))
    return EXIT_OK if response.summary["fails"] == 0 else EXIT_MISMATCH


def cmd_catalog(args: argparse.Namespace) -> int:
    request = service.CatalogRequest(
        family=args.family, r=args.r, gamma_rank=args.gamma_rank
    )
    if args.server:
        response = service.CatalogResponse.model_validate(
            _post(args.server, "/catalog", request.model_dump())
        )
    else:
        response = service.catalog_run(request)
    _write_records(response.records, args.out)
    fails = sum(1 for rec in response.records if not rec.passed)
    sys.stdout.write(
        _json_dumps({"count": response.count, "fails": fails})
    )
    return EXIT_OK if fails == 0 else EXIT_MISMATCH


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    uvicorn.run("rgroups.api:app", host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rgroups",
        description="R-groups and elliptic constituents for similitude groups",
    )
    parser.add_argument(
        "--server",
        default=None,
        help="base URL of a running service (default: run in-process)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="analyze one instance file")
    p.add_argument("path")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--oracle", action="store_true", help="embed the brute-force cross-check")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("example", help="analyze a bundled instance")
    p.add_argument("name", choices=service.example_names())
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--oracle", action="store_true")
    p.add_argument("--dump", action="store_true", help="print the instance document instead")
    p.set_defaults(func=cmd_example)

    p = sub.add_parser("verify", help="differential check of one instance file")
    p.add_argument("path")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("fuzz", help="seeded random differential campaign")
    p.add_argument(
        "--family",
        action="append",
        default=None,
        help="family to include (repeatable; default all five)",
    )
    p.add_argument("--min-r", type=int, default=1)
    p.add_argument("--max-r", type=int, default=5)
    p.add_argument("--gamma-rank", type=int, default=2)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default=None, help="write JSONL records here")
    p.set_defaults(func=cmd_fuzz)

    p = sub.add_parser("catalog", help="exhaustive canonical catalog for one family")
    p.add_argument("--family", required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--gamma-rank", type=int, default=2)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "func", None) is cmd_fuzz and args.family is None:
        args.family = list(service.oracle_families())
    try:
        return args.func(args)
    except (ValidationError, SchemaError, InstanceSyntaxError) as exc:
        sys.stderr.write(f"invalid instance: {exc}\n")
        return EXIT_VALIDATION
    except CapExceeded as exc:
        sys.stderr.write(f"cap exceeded: {exc}\n")
        return EXIT_CAP
    except UnknownExample as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_OTHER
    except FileNotFoundError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_OTHER
    except ValueError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_OTHER
    except RGroupsError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_OTHER


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
