"""Command-line front end.

Exit codes: 0 success, 1 validation failure, 2 undetermined verdict under
--strict, 3 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from kgraph import dynamics, generators, measures, monoid, repring
from kgraph.ksystem import KSystemError, ValidationError, load, to_dict, validate
from kgraph.report import build_report, dumps, format_human, undetermined

EXIT_OK, EXIT_INVALID, EXIT_UNDETERMINED, EXIT_BAD_INPUT = 0, 1, 2, 3


class BadInput(Exception):
    pass


def _load(path: str):
    try:
        return load(path)
    except OSError as exc:
        raise BadInput(f"cannot read {path}: {exc}") from exc
    except KSystemError as exc:
        raise BadInput(str(exc)) from exc


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_validate(args: argparse.Namespace) -> int:
    system = _load(args.path)
    mode = "partial" if args.partial else "strict"
    try:
        rep = validate(system, mode)
    except ValidationError as exc:
        rep = exc.report
    doc = rep.to_dict()
    if args.json:
        _write(dumps(doc), None)
    else:
        status = "ok" if rep.ok else f"{len(rep.square_errors) + len(rep.cube_errors) + len(rep.commute_errors)} error(s)"
        print(f"{mode} validation: {status}")
        for err in (rep.square_errors + rep.cube_errors + rep.commute_errors)[:20]:
            print(f"  {err['message']}")
        if args.partial:
            print(f"interior: {len(rep.interior)} of {len(system.vertices)} vertices")
    if rep.ok:
        return EXIT_OK
    if args.partial and rep.interior:
        return EXIT_OK
    return EXIT_INVALID


def cmd_report(args: argparse.Namespace) -> int:
    system = _load(args.path)
    try:
        validate(system, "strict")
    except ValidationError as exc:
        print(f"invalid system: {exc}", file=sys.stderr)
        return EXIT_INVALID
    cocycle = None
    if args.trace:
        cocycle = measures.Cocycle.trace(system.rank)
    elif args.c:
        try:
            cocycle = measures.Cocycle.parse(args.c)
        except ValueError as exc:
            raise BadInput(str(exc)) from exc
        if len(cocycle.values) != system.rank:
            raise BadInput(f"--c needs {system.rank} value(s)")
    bounds = dynamics.Bounds(args.pair_bound, args.ext_bound, args.deg_bound, args.set_bound)
    doc = build_report(system, bounds, cocycle)
    _write(dumps(doc) if args.json else format_human(doc), args.out)
    if args.strict and undetermined(doc):
        return EXIT_UNDETERMINED
    return EXIT_OK


def cmd_gen(args: argparse.Namespace) -> int:
    p = args.params
    try:
        if args.kind == "cuntz":
            _arity(p, 1, "cuntz N")
            system = generators.cuntz(int(p[0]))
        elif args.kind == "loop":
            _arity(p, 0, "loop")
            system = generators.loop()
        elif args.kind == "grid":
            if len(p) not in (2, 3):
                raise BadInput("usage: grid M N [flip|transpose|PERM]")
            spec = generators.parse_square_spec(p[2]) if len(p) == 3 else "flip"
            system = generators.grid(int(p[0]), int(p[1]), spec)
        else:
            _arity(p, 2, "dr N L")
            system, interior = repring.dr_ksystem(int(p[0]), int(p[1]))
            print(f"declared interior: first row <= {int(p[1]) - 2} ({len(interior)} vertices)",
                  file=sys.stderr)
    except ValueError as exc:
        raise BadInput(str(exc)) from exc
    _write(json.dumps(to_dict(system), indent=2) + "\n", args.out)
    return EXIT_OK


def _arity(params: Sequence[str], n: int, usage: str) -> None:
    if len(params) != n:
        raise BadInput(f"usage: {usage}")


def cmd_monoid(args: argparse.Namespace) -> int:
    try:
        if args.table:
            m = monoid.load_table(args.table)
        else:
            name, *rest = args.builtin
            m = monoid.builtin(name, int(rest[0]) if rest else None)
    except (OSError, ValueError) as exc:
        raise BadInput(str(exc)) from exc
    doc = {"schema": 1, "monoid": m.describe()}
    if args.check_ore:
        rep = monoid.check_ore(m, args.samples, args.seed)
        doc["ore_check"] = rep.to_dict(m)
        doc["samples"] = args.samples
        doc["seed"] = args.seed
    if args.json:
        _write(dumps(doc), None)
    else:
        print(f"monoid: {m.describe()}")
        if args.check_ore:
            oc = doc["ore_check"]
            print("Ore" if oc["ore"] else "not Ore")
            for key in ("o1", "o2"):
                r = oc[key]
                line = f"  {key.upper()}: {r['status']}"
                if r.get("witness"):
                    line += f" witness {r['witness']}"
                print(line)
            print(f"  cancellative: {oc['cancellative']}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kgraph", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="check the factorisation axioms of a system file")
    v.add_argument("path")
    v.add_argument("--partial", action="store_true", help="report the clean interior instead of failing")
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_validate)

    r = sub.add_parser("report", help="run every analysis on a system file")
    r.add_argument("path")
    r.add_argument("--json", action="store_true")
    r.add_argument("--pair-bound", type=int, default=4)
    r.add_argument("--ext-bound", type=int, default=3)
    r.add_argument("--deg-bound", type=int, default=2)
    r.add_argument("--set-bound", type=int, default=3)
    grp = r.add_mutually_exclusive_group()
    grp.add_argument("--c", help="cocycle values c1,...,ck for the KMS measure section")
    grp.add_argument("--trace", action="store_true", help="use c = 1 for the KMS measure section")
    r.add_argument("--strict", action="store_true", help="exit 2 if a verdict is undetermined")
    r.add_argument("-o", "--out")
    r.set_defaults(func=cmd_report)

    g = sub.add_parser("gen", help="write a built-in example system")
    g.add_argument("kind", choices=["cuntz", "loop", "grid", "dr"])
    g.add_argument("params", nargs="*")
    g.add_argument("-o", "--out")
    g.set_defaults(func=cmd_gen)

    m = sub.add_parser("monoid", help="inspect an Ore monoid")
    src = m.add_mutually_exclusive_group(required=True)
    src.add_argument("--builtin", nargs="+", metavar="NAME [ARG]",
                     help="heisenberg | nk K | free N")
    src.add_argument("--table", help="multiplication table file")
    m.add_argument("--check-ore", action="store_true")
    m.add_argument("--samples", type=int, default=200)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--json", action="store_true")
    m.set_defaults(func=cmd_monoid)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_BAD_INPUT if exc.code else EXIT_OK
    for name in ("pair_bound", "ext_bound", "deg_bound", "set_bound", "samples"):
        if getattr(args, name, 0) is not None and getattr(args, name, 0) < 0:
            print(f"error: --{name.replace('_', '-')} must be nonnegative", file=sys.stderr)
            return EXIT_BAD_INPUT
    try:
        return args.func(args)
    except BadInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
