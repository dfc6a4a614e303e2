"""Command-line client for the hypervc service.

The CLI is a thin client: every subcommand builds a JSON request and posts
it to the FastAPI app, in-process by default or to a remote server via
--server.  Rationals on the command line use "num/den" form; decimals are
rejected.  Exit codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from .rational import parse_rational


class _Client:
    """Posts to the in-process app or a remote base URL."""

    def __init__(self, server: Optional[str]) -> None:
        if server:
            import httpx

            self._client = httpx.Client(base_url=server, timeout=600.0)
        else:
            from fastapi.testclient import TestClient

            from .service import app

            self._client = TestClient(app)

    def post(self, path: str, payload: dict) -> dict:
        resp = self._client.post(path, json=payload)
        if resp.status_code >= 400:
            try:
                detail = resp.json().get("detail", resp.text)
            except Exception:
                detail = resp.text
            raise SystemExit(f"error: {detail}") from None
        return resp.json()


def _read_json(path: Optional[str]):
    if path is None or path == "-":
        return json.load(sys.stdin)
    with open(path) as fh:
        return json.load(fh)


def _emit(obj: dict, out: Optional[str]) -> None:
    text = json.dumps(obj, sort_keys=True, indent=2)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _rational_arg(text: str) -> str:
    parse_rational(text)  # reject decimals early, with a usage error
    return text


def _ratio_table(rows: list[dict]) -> str:
    header = ["instance", "k", "lp", "vc", "vc/lp", "k/2"]
    lines = ["\t".join(header)]
    for row in rows:
        ratio = row.get("vcOverLp")
        dec = ""
        if ratio:
            q = parse_rational(ratio)
            dec = f" ({float(q):.4f})"
        lines.append(
            "\t".join(
                str(x)
                for x in [
                    row["instance"],
                    row["k"],
                    row["lp"],
                    row.get("vc"),
                    (ratio or "") + dec,
                    row["halfK"],
                ]
            )
        )
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypervc",
        description="exact vertex-cover toolkit for k-partite k-uniform hypergraphs",
    )
    parser.add_argument("--server", help="base URL of a running service (default: in-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gap", help="build an integrality-gap instance and verify it")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--full", action="store_true", help="materialize all zero-value duplicates")
    p.add_argument("--no-solve", action="store_true", help="skip LP and exact solves")
    p.add_argument("--out")

    p = sub.add_parser("solve", help="run solvers on a hypergraph JSON file")
    p.add_argument("input", nargs="?", default="-", help="hypergraph JSON path or - for stdin")
    p.add_argument("--mode", choices=["lp", "exact", "round", "greedy", "all"], default="all")
    p.add_argument("--id", default="instance")
    p.add_argument("--format", choices=["json", "table"], default="json")
    p.add_argument("--out")

    p = sub.add_parser("setfam", help="set-family tools")
    sf = p.add_subparsers(dest="setfam_command", required=True)
    q = sf.add_parser("measure", help="biased measure of a family")
    q.add_argument("input", nargs="?", default="-")
    q.add_argument("--p", type=_rational_arg, required=True)
    q.add_argument("--out")
    q = sf.add_parser("shift", help="left-shift a family (or one (i,j)-shift)")
    q.add_argument("input", nargs="?", default="-")
    q.add_argument("--i", type=int)
    q.add_argument("--j", type=int)
    q.add_argument("--out")
    q = sf.add_parser("cross", help="test the k-wise t-cross-intersecting property")
    q.add_argument("input", nargs="?", default="-", help="JSON list of families")
    q.add_argument("--t", type=int, required=True)
    q.add_argument("--out")
    q = sf.add_parser("witness", help="prefix-density / balls-and-bins witnesses")
    q.add_argument("input", nargs="?", default="-", help="one family, or a JSON list for balls-and-bins")
    q.add_argument("--q", type=_rational_arg, help="single-family density bias")
    q.add_argument("--qs", type=_rational_arg, nargs="+", help="per-family biases for balls-and-bins")
    q.add_argument("--t", type=int, required=True)
    q.add_argument("--non-strict", action="store_true")
    q.add_argument("--out")
    q = sf.add_parser("t", help="Chernoff threshold t(eps, delta)")
    q.add_argument("--eps", type=_rational_arg, required=True)
    q.add_argument("--delta", type=_rational_arg, required=True)
    q.add_argument("--out")

    p = sub.add_parser("pcp", help="layered label-cover tools")
    pc = p.add_subparsers(dest="pcp_command", required=True)
    q = pc.add_parser("gen", help="generate a toy layered CSP")
    q.add_argument("--layers", type=int, required=True)
    q.add_argument("--vars", type=int, required=True)
    q.add_argument("--ranges", type=int, nargs="+", required=True)
    q.add_argument("--density", type=_rational_arg, default="1")
    q.add_argument("--unplanted", action="store_true")
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--out")
    q = pc.add_parser("best", help="exhaustive best labeling for a layer pair")
    q.add_argument("input", nargs="?", default="-")
    q.add_argument("--layer-a", type=int, required=True)
    q.add_argument("--layer-b", type=int, required=True)
    q.add_argument("--out")
    q = pc.add_parser("density", help="weak-density witness for chosen layers/subsets")
    q.add_argument("input", nargs="?", default="-")
    q.add_argument("--delta", type=_rational_arg, required=True)
    q.add_argument("--layers", type=int, nargs="+", required=True)
    q.add_argument("--subsets", required=True, help="JSON list of variable-name lists")
    q.add_argument("--out")

    p = sub.add_parser("reduce", help="build the Long-Code reduction for a CSP")
    p.add_argument("--csp", required=True, help="CSP JSON path")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--eps", type=_rational_arg, required=True)
    p.add_argument("--out")

    p = sub.add_parser("decode", help="decode an independent set into a labeling")
    p.add_argument("--instance", required=True, help="reduction instance JSON path")
    p.add_argument("--iset", required=True, help="JSON array of vertex ids")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--layer-a", type=int, default=0)
    p.add_argument("--layer-b", type=int, default=1)
    p.add_argument("--out")

    p = sub.add_parser("report", help="ratio table over several instances")
    p.add_argument("inputs", nargs="+", help="hypergraph JSON paths")
    p.add_argument("--format", choices=["json", "table"], default="table")
    p.add_argument("--out")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8080)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "serve":
        import uvicorn

        from .service import app

        uvicorn.run(app, host=args.host, port=args.port)
        return 0

    client = _Client(args.server)
    try:
        if args.command == "gap":
            resp = client.post(
                "/gap",
                {"r": args.r, "k": args.k, "full": args.full, "solve": not args.no_solve},
            )
            _emit(resp, args.out)
        elif args.command == "solve":
            h = _read_json(args.input)
            resp = client.post(
                "/solve", {"hypergraph": h, "mode": args.mode, "instanceId": args.id}
            )
            if args.format == "table":
                print(_ratio_table([resp["report"]]))
                if args.out:
                    _emit(resp, args.out)
            else:
                _emit(resp, args.out)
        elif args.command == "setfam":
            if args.setfam_command == "measure":
                resp = client.post(
                    "/setfam/measure", {"family": _read_json(args.input), "p": args.p}
                )
            elif args.setfam_command == "shift":
                payload = {"family": _read_json(args.input)}
                if args.i is not None:
                    payload.update({"i": args.i, "j": args.j})
                resp = client.post("/setfam/shift", payload)
            elif args.setfam_command == "cross":
                resp = client.post(
                    "/setfam/cross", {"families": _read_json(args.input), "t": args.t}
                )
            elif args.setfam_command == "witness":
                data = _read_json(args.input)
                if args.qs:
                    resp = client.post(
                        "/setfam/balls-and-bins",
                        {"families": data, "qs": args.qs, "t": args.t},
                    )
                elif args.q:
                    resp = client.post(
                        "/setfam/density-witness",
                        {
                            "family": data,
                            "q": args.q,
                            "t": args.t,
                            "strict": not args.non_strict,
                        },
                    )
                else:
                    parser.error("witness needs --q (density) or --qs (balls-and-bins)")
            else:  # t
                resp = client.post(
                    "/setfam/chernoff-t", {"eps": args.eps, "delta": args.delta}
                )
            _emit(resp, getattr(args, "out", None))
        elif args.command == "pcp":
            if args.pcp_command == "gen":
                resp = client.post(
                    "/pcp/generate",
                    {
                        "layerCount": args.layers,
                        "varsPerLayer": args.vars,
                        "rangeSizes": args.ranges,
                        "constraintDensity": args.density,
                        "planted": not args.unplanted,
                        "seed": args.seed,
                    },
                )
            elif args.pcp_command == "best":
                resp = client.post(
                    "/pcp/best",
                    {
                        "csp": _read_json(args.input),
                        "layerA": args.layer_a,
                        "layerB": args.layer_b,
                    },
                )
            else:  # density
                resp = client.post(
                    "/pcp/density",
                    {
                        "csp": _read_json(args.input),
                        "delta": args.delta,
                        "layers": args.layers,
                        "subsets": json.loads(args.subsets),
                    },
                )
            _emit(resp, args.out)
        elif args.command == "reduce":
            resp = client.post(
                "/reduce",
                {
                    "csp": _read_json(args.csp),
                    "k": args.k,
                    "r": args.r,
                    "eps": args.eps,
                },
            )
            _emit(resp, args.out)
        elif args.command == "decode":
            resp = client.post(
                "/decode",
                {
                    "instance": _read_json(args.instance),
                    "independentSet": _read_json(args.iset),
                    "seed": args.seed,
                    "layerPair": [args.layer_a, args.layer_b],
                },
            )
            _emit(resp, args.out)
        elif args.command == "report":
            instances = [
                {"id": path, "hypergraph": _read_json(path)} for path in args.inputs
            ]
            resp = client.post("/report", {"instances": instances})
            if args.format == "table":
                print(_ratio_table(resp["rows"]))
                if args.out:
                    _emit(resp, args.out)
            else:
                _emit(resp, args.out)
        else:  # pragma: no cover
            parser.error(f"unknown command {args.command!r}")
    except SystemExit as exc:
        if isinstance(exc.code, str):
            print(exc.code, file=sys.stderr)
            return 1
        raise
    return 0


if __name__ == "__main__":
    sys.exit(main())
