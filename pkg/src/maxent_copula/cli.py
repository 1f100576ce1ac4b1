"""Command-line client for the copula service.

By default the CLI runs the service in-process (no server needed); pass
``--server http://host:port`` to talk to a running instance instead.
Exit codes: 0 success (and verify pass), 1 verify fail, 2 usage error,
3 numeric failure.  Errors print a single machine-parsable line on
stderr of the form ``error: <kind>: <reason>``.
"""

import argparse
import json
import sys

from .diagonal import load_tabulated_csv
from .errors import TabulatedDataError

_EXIT_OK = 0
_EXIT_VERIFY_FAIL = 1
_EXIT_USAGE = 2
_EXIT_NUMERIC = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        print(f"error: usage: {message}", file=sys.stderr)
        raise SystemExit(_EXIT_USAGE)


def _add_family_flags(p, default_n):
    p.add_argument("--family", required=True,
                   choices=["plinear", "power", "fgm", "gaussian", "tabulated"])
    p.add_argument("--alpha", type=float)
    p.add_argument("--theta", type=float)
    p.add_argument("--rho", type=float)
    p.add_argument("--file", help="knot CSV `t,delta` for --family tabulated")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--n", type=int, default=default_n)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", choices=["csv", "json"], default=None)
    p.add_argument("--server", help="base URL of a running service; "
                   "defaults to in-process execution")


def build_parser():
    parser = _Parser(prog="maxent-copula",
                     description="maximum-entropy copulas with a prescribed diagonal")
    sub = parser.add_subparsers(dest="command", required=True)
    specs = [
        ("inspect", "entropy and feasibility report (JSON)", 0),
        ("grid", "density grid CSV over [0,1]^2", 201),
        ("diagonal-cross", "diagonal cross-section CSV (t, phi)", 201),
        ("sample", "draw points from the copula (CSV)", 10_000),
        ("verify", "run the constraint suite (JSON); exit 0 pass / 1 fail", 101),
    ]
    for name, help_text, default_n in specs:
        p = sub.add_parser(name, help=help_text)
        _add_family_flags(p, default_n)
    return parser


def _payload(args):
    body = {"family": args.family, "d": args.d}
    for key in ("alpha", "theta", "rho"):
        val = getattr(args, key)
        if val is not None:
            body[key] = val
    if args.family == "tabulated":
        if not args.file:
            print("error: usage: --family tabulated requires --file", file=sys.stderr)
            raise SystemExit(_EXIT_USAGE)
        try:
            body["knots"] = [list(k) for k in load_tabulated_csv(args.file)]
        except (OSError, ValueError, TabulatedDataError) as exc:
            print(f"error: usage: cannot read knot file: {exc}", file=sys.stderr)
            raise SystemExit(_EXIT_USAGE)
    return body


def _client(args):
    if args.server:
        import httpx

        return httpx.Client(base_url=args.server, timeout=600.0)
    from fastapi.testclient import TestClient

    from .service import app

    return TestClient(app)


def _post(args, path, body):
    with _client(args) as client:
        resp = client.post(path, json=body)
    if resp.status_code in (400, 422):
        detail = resp.json().get("detail", resp.text)
        print(f"error: usage: {detail}", file=sys.stderr)
        raise SystemExit(_EXIT_USAGE)
    if resp.status_code >= 500:
        try:
            detail = resp.json().get("detail", resp.text)
        except ValueError:
            detail = resp.text
        print(f"error: numeric: {detail}", file=sys.stderr)
        raise SystemExit(_EXIT_NUMERIC)
    return resp


def _emit(args, text):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    body = _payload(args)

    if args.command == "inspect":
        resp = _post(args, "/inspect", body)
        _emit(args, json.dumps(resp.json(), indent=2))
        return _EXIT_OK

    if args.command == "grid":
        body["n"] = args.n
        resp = _post(args, "/grid", body)
        _emit(args, resp.text)
        return _EXIT_OK

    if args.command == "diagonal-cross":
        body["n"] = args.n
        resp = _post(args, "/diagonal-cross", body)
        _emit(args, resp.text)
        return _EXIT_OK

    if args.command == "sample":
        body["n"] = args.n
        body["seed"] = args.seed
        resp = _post(args, "/sample", body)
        if args.format == "json":
            meta = {"seed": int(resp.headers["X-Sample-Seed"]),
                    "fingerprint": resp.headers["X-Model-Fingerprint"]}
            _emit(args, json.dumps(meta, indent=2))
        else:
            _emit(args, resp.text)
        return _EXIT_OK

    if args.command == "verify":
        body["n"] = args.n
        body["tol"] = args.tol
        body["seed"] = args.seed
        resp = _post(args, "/verify", body)
        report = resp.json()
        _emit(args, json.dumps(report, indent=2))
        return _EXIT_OK if report.get("passed") else _EXIT_VERIFY_FAIL

    return _EXIT_USAGE


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
