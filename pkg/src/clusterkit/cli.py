"""Command-line front end.

Every subcommand routes through the same evaluation core as the HTTP API.
Exit codes: 0 success (JSON on stdout), 1 domain error (structured JSON on
stderr), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import ClusterError, ParseError
from .io import canonical_json
from .service import DEPTH_CAPS, evaluate, serve

__all__ = ["main"]


def _read_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc


def _ids(text: str) -> list[str]:
    return [part for part in text.split(",") if part]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="clusterkit",
        description="Exact seeds, mutations and morphisms for cluster algebras",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def with_common(p, seed=True):
        if seed:
            p.add_argument("--seed", required=True, help="seed JSON file")
            p.add_argument("--seq", default="", help="comma-separated mutation sequence to replay first")
        p.add_argument("--pretty", action="store_true", help="indent the JSON output")
        p.add_argument("--json", action="store_true", help="compact JSON output (default)")
        return p

    p = with_common(sub.add_parser("mutate", help="mutate a seed at one direction"))
    p.add_argument("--at", required=True, help="exchangeable variable id")

    p = with_common(sub.add_parser("subseed", help="freeze/delete variables"))
    p.add_argument("--freeze", default="", help="comma-separated ids to freeze")
    p.add_argument("--delete", default="", help="comma-separated ids to delete")

    p = with_common(sub.add_parser("glue", help="glue a frozen pair"))
    p.add_argument("--pair", required=True, help="y1,y2")
    p.add_argument("--force", action="store_true", help="skip the glueability check")

    p = with_common(sub.add_parser("census", help="count rooted cluster subalgebras"))
    p.add_argument("--records", action="store_true", help="list the (freeze, delete) records")

    p = with_common(sub.add_parser("classify", help="finite type / finite mutation type"))
    p.add_argument("--cap", type=int, default=None, help="work budget for the closures")

    p = with_common(sub.add_parser("specialise", help="specialisation morphism at a variable set"))
    p.add_argument("--at", required=True, help="comma-separated ids sent to 1")
    p.add_argument("--depth", type=int, default=None, help="CM3 search depth")

    p = with_common(sub.add_parser("check-total", help="probe total sign-skew-symmetry"))
    p.add_argument("--depth", type=int, default=None, help="BFS depth")

    p = with_common(sub.add_parser("check-hom", help="verify a seed homomorphism"), seed=False)
    p.add_argument("--hom", required=True, help="hom JSON file {source, target, map}")

    p = with_common(sub.add_parser("check-morphism", help="verify a rooted cluster morphism"), seed=False)
    p.add_argument("--morphism", required=True, help="morphism JSON file {source, target, map}")
    p.add_argument("--depth", type=int, default=None, help="CM3 search depth")

    p = with_common(sub.add_parser("decompose", help="decompose a seed or a surjective morphism"), seed=False)
    p.add_argument("--seed", help="seed JSON file: split into indecomposable sub-seeds")
    p.add_argument("--seq", default="", help="comma-separated mutation sequence to replay first")
    p.add_argument("--morphism", help="morphism JSON file: gluing steps + final isomorphism")

    p = with_common(sub.add_parser("serve", help="run the HTTP API"), seed=False)
    p.add_argument("--port", type=int, required=True)
    p.add_argument("--host", default="127.0.0.1")
    return parser


def _request_for(args) -> dict:
    request: dict = {}
    if getattr(args, "seed", None):
        request["seed"] = _read_json(args.seed)
        request["seq"] = _ids(getattr(args, "seq", "") or "")
    depths = {}
    depth = getattr(args, "depth", None)
    cmd = args.command
    if depth is not None:
        if cmd == "check-total":
            depths["totality"] = depth
        else:
            depths["cm3"] = depth
    if depths:
        request["depths"] = depths

    if cmd == "mutate":
        request["action"] = {"mutate": args.at}
    elif cmd == "subseed":
        request["action"] = {"subseed": {"freeze": _ids(args.freeze), "delete": _ids(args.delete)}}
    elif cmd == "glue":
        pair = _ids(args.pair)
        if len(pair) != 2:
            raise ParseError("--pair needs exactly two ids")
        request["action"] = {"glue": {"pair": pair, "force": bool(args.force)}}
    elif cmd == "census":
        request["action"] = {"enumerate": {"records": bool(args.records)}}
    elif cmd == "classify":
        payload = {} if args.cap is None else {"cap": args.cap}
        request["action"] = {"classify": payload}
    elif cmd == "specialise":
        request["action"] = {"specialise": {"at": _ids(args.at)}}
    elif cmd == "check-total":
        request["action"] = {"check_total": {}}
    elif cmd == "check-hom":
        request["action"] = {"check_hom": _read_json(args.hom)}
    elif cmd == "check-morphism":
        request["action"] = {"check_morphism": _read_json(args.morphism)}
    elif cmd == "decompose":
        if args.morphism:
            request["action"] = {"decompose": {"morphism": _read_json(args.morphism)}}
        elif args.seed:
            request["action"] = {"decompose": "seed"}
        else:
            raise ParseError("decompose needs --seed or --morphism")
    else:
        raise ParseError(f"unknown command {cmd!r}")
    return request


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)

    if args.command == "serve":
        httpd = serve(args.port, args.host)
        caps = ", ".join(f"{k}<={v}" for k, v in DEPTH_CAPS.items())
        print(f"clusterkit API on http://{args.host}:{args.port}/api/v1 (depth caps: {caps})", file=sys.stderr)
        try:
            httpd.serve_forever()
        except KeyboardInterrupt:
            pass
        finally:
            httpd.server_close()
        return 0

    try:
        request = _request_for(args)
        response = evaluate(request)
    except ClusterError as exc:
        print(canonical_json({"error": exc.payload()}), file=sys.stderr)
        return 1
    for note in response["diagnostics"]:
        print(f"warning: {note}", file=sys.stderr)
    # the CLI prints the bare action payload; seed-producing actions print
    # the seed JSON itself (the HTTP API keeps the full response envelope)
    body = response["result"]
    if isinstance(body, dict) and set(body) == {"seed"}:
        body = body["seed"]
    if getattr(args, "pretty", False):
        print(json.dumps(body, sort_keys=True, indent=2))
    else:
        print(canonical_json(body))
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
