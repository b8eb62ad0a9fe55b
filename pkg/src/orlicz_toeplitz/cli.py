"""Command line front-end.

Every subcommand reads JSON inputs (a path, or an inline JSON string),
writes sorted-key JSON to ``--out`` or stdout, and exits with

* 0 on success (``localise``: Fredholm verdict),
* 2 / 3 for ``localise`` verdicts withheld / inconclusive,
* 64 when an input does not match its schema,
* 65 when a computation fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from .errors import OrliczError
from .indices import matuszewska_orlicz_indices
from .majorant import build_phi_theta
from .nfunction import nfunction_from_json
from .operators import build, widom_parts
from .orlicz_space import FiniteSequence, luxemburg_norm
from .symbols import symbol_from_json

EXIT_SCHEMA = 64
EXIT_COMPUTE = 65


class SchemaError(Exception):
    def __init__(self, location: str, message: str):
        super().__init__(f"{location}: {message}")
        self.location = location


def _load(arg: str, location: str):
    text = arg
    if not arg.lstrip().startswith(("{", "[")):
        path = Path(arg)
        if not path.is_file():
            raise SchemaError(location, f"file {arg!r} does not exist")
        text = path.read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(location, f"invalid JSON ({exc})") from None


def _parse(loader, arg, location):
    data = _load(arg, location)
    try:
        return loader(data)
    except OrliczError as exc:
        raise SchemaError(location, str(exc)) from None


def _jsonable(obj):
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, tuple):
        return list(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2, default=_jsonable) + "\n"


def _emit(text: str, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# -- subcommands ------------------------------------------------------------------

def cmd_indices(args):
    phi = _parse(nfunction_from_json, args.phi, "--phi")
    _emit(dumps(matuszewska_orlicz_indices(phi).to_json()), args.out)
    return 0


def cmd_phi_theta(args):
    phi = _parse(nfunction_from_json, args.phi, "--phi")
    if args.theta is None:
        raise SchemaError("--theta", "required")
    pt = build_phi_theta(phi, args.theta)
    _emit(dumps(pt.to_json()), args.out)
    return 0


def cmd_norm(args):
    phi = _parse(nfunction_from_json, args.phi, "--phi")
    seq = _parse(FiniteSequence.from_json, args.seq, "--seq")
    _emit(dumps({"norm": luxemburg_norm(phi, seq), "support_size": seq.size}), args.out)
    return 0


def cmd_operator(args):
    a = _parse(symbol_from_json, args.symbol, "--symbol")
    if args.n is None or args.n < 1:
        raise SchemaError("--n", "a positive truncation size is required")
    op = build(a, args.role, args.n)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in op.matrix:
        writer.writerow([repr(float(x)) for z in row for x in (z.real, z.imag)])
    _emit(buf.getvalue(), args.emit or args.out)
    return 0


def cmd_widom(args):
    a = _parse(symbol_from_json, args.a, "--a")
    b = _parse(symbol_from_json, args.b, "--b")
    window = args.window or 20
    n = args.n or window + getattr(a, "degree", 0) + getattr(b, "degree", 0) + 1
    parts = widom_parts(a, b, n, window)
    tol = 1e-12 if args.tol is None else args.tol
    res = parts.residual
    _emit(dumps({"N": n, "window": window, "residual": res, "tol": tol, "passed": res <= tol}), args.out)
    return 0


def cmd_localise(args):
    from .localisation import LocalAssignment, localise

    phi = _parse(nfunction_from_json, args.phi, "--phi")
    a = _parse(symbol_from_json, args.symbol, "--symbol")
    assignment = _parse(LocalAssignment.from_json, args.assignment, "--assignment")
    rep = localise(a, phi, assignment)
    _emit(dumps(rep.to_json()), args.out)
    return rep.exit_code


def cmd_suite(args):
    from .acceptance import run_suite

    only = {int(x) for x in args.only.split(",")} if args.only else None
    results = run_suite(only, echo=lambda line: print(line, file=sys.stderr))
    if args.out:
        Path(args.out).write_text(dumps([r.to_json() for r in results]))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["criterion", "name", "passed", "seconds"])
    for r in results:
        writer.writerow([r.number, r.name, "pass" if r.passed else "fail", f"{r.seconds:.2f}"])
    sys.stdout.write(buf.getvalue())
    return 0 if all(r.passed for r in results) else 1


# -- parser -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--seed", type=int, default=0, help="seed for every sampler")
    common.add_argument("--tol", type=float, default=None, help="tolerance override")

    p = argparse.ArgumentParser(prog="orlicz-toeplitz",
                                description="Toeplitz operators on Orlicz sequence spaces")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("indices", parents=[common], help="Matuszewska-Orlicz indices")
    s.add_argument("--phi", required=True)
    s.set_defaults(func=cmd_indices)

    s = sub.add_parser("phi-theta", parents=[common], help="build Phi_theta and its constants")
    s.add_argument("--phi", required=True)
    s.add_argument("--theta", type=float)
    s.set_defaults(func=cmd_phi_theta)

    s = sub.add_parser("norm", parents=[common], help="Luxemburg norm of a finite sequence")
    s.add_argument("--phi", required=True)
    s.add_argument("--seq", required=True, help="JSON list of [index, re, im]")
    s.set_defaults(func=cmd_norm)

    s = sub.add_parser("operator", parents=[common], help="dense truncation as CSV of re,im pairs")
    s.add_argument("--symbol", required=True)
    s.add_argument("--role", default="toeplitz",
                   choices=["toeplitz", "laurent", "hankel", "hankel_plus", "hankel_minus", "hankel_tilde"])
    s.add_argument("--n", type=int)
    s.add_argument("--emit", help="CSV output path (same as --out)")
    s.set_defaults(func=cmd_operator)

    s = sub.add_parser("widom-check", parents=[common], help="residual of T(ab) = T(a)T(b) + H(a)H(b~)")
    s.add_argument("--a", required=True)
    s.add_argument("--b", required=True)
    s.add_argument("--window", type=int)
    s.add_argument("--n", type=int)
    s.set_defaults(func=cmd_widom)

    s = sub.add_parser("localise", parents=[common], help="local principle verdict")
    s.add_argument("--phi", required=True)
    s.add_argument("--symbol", required=True)
    s.add_argument("--assignment", required=True)
    s.add_argument("--theta", type=float, help="unused; theta comes from the assignment")
    s.set_defaults(func=cmd_localise)

    s = sub.add_parser("suite", parents=[common], help="run the acceptance battery")
    s.add_argument("--only", help="comma separated criterion numbers")
    s.set_defaults(func=cmd_suite)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_SCHEMA if exc.code else 0
    try:
        return args.func(args)
    except SchemaError as exc:
        sys.stderr.write(dumps({"error": "schema", "location": exc.location, "message": str(exc)}))
        return EXIT_SCHEMA
    except OrliczError as exc:
        sys.stderr.write(dumps(exc.payload()))
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
