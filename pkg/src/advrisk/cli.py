"""Thin command-line client for the solver service.

Scenarios are validated against the shipped JSON schema, then posted to
the service: an in-process instance by default, or a remote one via
``--server URL``.  Exit codes: 0 success, 2 validation/usage error, 3
verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import httpx
import jsonschema

SUBCOMMANDS = ("risk", "optimal-risk", "game", "nash", "verify", "probe")

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_CHECK_FAILED = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="advrisk",
        description="Adversarial risk, transport duality and game certificates "
        "on finite metric spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--server", default=None, help="URL of a running service; "
                       "defaults to an in-process instance")

    def scenario_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--input", default="-", help="scenario JSON file, or '-' for stdin")
        p.add_argument("--mode", choices=("exact", "float"), default=None,
                       help="override the scenario's arithmetic mode")
        p.add_argument("--tolerance", type=float, default=None,
                       help="override the float-mode tolerance (default 1e-9)")
        common(p)

    for name in ("risk", "optimal-risk", "game", "nash", "probe"):
        scenario_flags(sub.add_parser(name))

    verify = sub.add_parser("verify")
    verify.add_argument("--suite", default="all", help="check name or 'all'")
    verify.add_argument("--seed", type=int, default=1)
    verify.add_argument("--count", type=int, default=100)
    verify.add_argument("--jobs", type=int, default=1)
    common(verify)
    return parser


def _client(server):
    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    import warnings

    with warnings.catch_warnings():
        # silence the starlette/httpx pairing notice; it is environmental
        warnings.filterwarnings("ignore", message="Using `httpx` with `starlette.testclient`")
        from fastapi.testclient import TestClient

    from .service.app import create_app

    return TestClient(create_app())


def _load_scenario(args) -> dict:
    if args.input == "-":
        raw = sys.stdin.read()
    else:
        raw = Path(args.input).read_text(encoding="utf-8")
    data = json.loads(raw)
    from .service.app import load_schema

    jsonschema.validate(data, load_schema())
    if args.mode is not None:
        data["mode"] = args.mode
    if args.tolerance is not None:
        data["tolerance"] = args.tolerance
    return data


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}{k}.")
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}{i}.")
    else:
        yield prefix.rstrip("."), obj


def _emit(payload: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(payload, indent=2))
        return
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(["key", "value"])
    for key, value in _flatten(payload):
        writer.writerow([key, "" if value is None else value])
    sys.stdout.write(buffer.getvalue())


def _print_http_error(response: httpx.Response) -> None:
    try:
        detail = response.json().get("detail")
    except ValueError:
        detail = response.text
    if isinstance(detail, list):
        for item in detail:
            loc = ".".join(str(p) for p in item.get("loc", []) if p not in ("body",))
            print(f"validation error at {loc or '(root)'}: {item.get('msg')}", file=sys.stderr)
    else:
        print(f"error: {detail}", file=sys.stderr)


def run(argv) -> int:
    args = _build_parser().parse_args(argv)
    with _client(args.server) as client:
        if args.command == "verify":
            payload = {
                "suite": args.suite,
                "seed": args.seed,
                "count": args.count,
                "jobs": args.jobs,
            }
            response = client.post("/v1/verify", json=payload)
            if response.status_code != 200:
                _print_http_error(response)
                return EXIT_VALIDATION
            body = response.json()
            _emit(body, args.format)
            return EXIT_CHECK_FAILED if body.get("failed") else EXIT_OK

        try:
            data = _load_scenario(args)
        except (OSError, json.JSONDecodeError) as exc:
            print(f"cannot read scenario: {exc}", file=sys.stderr)
            return EXIT_VALIDATION
        except jsonschema.ValidationError as exc:
            path = ".".join(str(p) for p in exc.absolute_path) or "(root)"
            print(f"validation error at {path}: {exc.message}", file=sys.stderr)
            return EXIT_VALIDATION
        response = client.post(f"/v1/{args.command}", json=data)
        if response.status_code != 200:
            _print_http_error(response)
            return EXIT_VALIDATION
        _emit(response.json(), args.format)
        return EXIT_OK


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
