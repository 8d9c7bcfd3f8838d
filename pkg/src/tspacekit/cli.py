"""Command-line front end: reduce, verify, member, expand."""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import List, Optional

from .expr import ExprError, parse_poly
from .freealg import ModulusError, is_prime
from .reduction import closure_covers, family, reduce_sequence
from .suite import DESCRIPTIONS, FAIL, run_suite
from .symmetric import GeneratorId, generator
from .tspace import Limits, SpanSpec, span_membership

ENV_P = "TSPACEKIT_P"
DEFAULT_P = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _modulus(text: str) -> int:
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"modulus must be an integer, got {text!r}") from None
    if not is_prime(p):
        raise argparse.ArgumentTypeError(f"modulus {p} is not prime")
    return p


def _default_p() -> int:
    raw = os.environ.get(ENV_P)
    if raw is None:
        return DEFAULT_P
    try:
        return _modulus(raw)
    except argparse.ArgumentTypeError as exc:
        raise UsageError(f"{ENV_P}: {exc}") from None


def build_parser(default_p: int) -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--p", type=_modulus, default=default_p,
                        help=f"prime modulus (default from ${ENV_P}, else {DEFAULT_P})")
    common.add_argument("--format", choices=("text", "json"), default="text")

    parser = _Parser(prog="tspacekit", description="T-space certificates and index reduction over F_p.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    red = sub.add_parser("reduce", parents=[common], help="shrink an index sequence to a generating subset")
    red.add_argument("--sequence", help="comma separated strictly increasing indices")
    red.add_argument("--family", help="odd | squares | primes | all | ap:<a>,<d>")
    red.add_argument("--length", type=int, help="prefix length for --family")
    red.add_argument("--basis", choices=("h", "s"), default="h", help="H_n or S_n^(d) generators")
    red.add_argument("--d", type=int, default=2, help="arity for the S basis")
    red.add_argument("--oracle-bound", type=int, help="closure check bound (default: last entry)")

    ver = sub.add_parser("verify", parents=[common], help="run suite checks")
    ver.add_argument("--checks", help="comma list of ids or ranges, e.g. C1,C3-C5 (default all)")
    ver.add_argument("--long", action="store_true", help="include the expensive p=5 compositions")

    mem = sub.add_parser("member", parents=[common], help="span membership of a polynomial")
    mem.add_argument("--expr", required=True)
    mem.add_argument("--tspace", required=True, help='e.g. "S(2) + S(2,2)" or "H(1) + H(1)*S(3)"')
    mem.add_argument("--limits", help="instances=N,degree=N,support=N,time=SECONDS")

    exp = sub.add_parser("expand", parents=[common], help="print the canonical form")
    exp.add_argument("--expr", required=True)
    return parser


def _sequence(args) -> tuple:
    if args.sequence and args.family:
        raise UsageError("give either --sequence or --family, not both")
    if args.family:
        if args.length is None:
            raise UsageError("--family needs --length")
        try:
            return family(args.family, args.length)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if not args.sequence:
        raise UsageError("reduce needs --sequence or --family")
    try:
        return tuple(int(x) for x in args.sequence.split(","))
    except ValueError:
        raise UsageError(f"bad sequence {args.sequence!r}") from None


def cmd_reduce(args, out) -> int:
    seq = _sequence(args)
    try:
        res = reduce_sequence(seq)
        bound = args.oracle_bound if args.oracle_bound is not None else max(seq)
        covered, closure = closure_covers(res.values, seq, bound)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.basis == "h":
        gids = [GeneratorId.H(v) for v in res.values]
    else:
        gids = [GeneratorId.Sn(args.d, v) for v in res.values]
    basis = [(str(g), str(generator(g, args.p))) for g in gids]
    if args.format == "json":
        doc = {
            "sequence": list(seq),
            "gap": res.gap,
            "positions": list(res.positions),
            "values": list(res.values),
            "basis": [{"generator": g, "poly": poly} for g, poly in basis],
            "covered": covered,
            "missing": list(closure.missing),
            "derivation": {str(n): closure.explain(n) for n in seq},
            "trace": [{"depth": s.depth, "sequence": list(s.sequence), "gap": s.gap,
                       "offender": s.offender, "t": s.t, "prepended": s.prepended} for s in res.trace],
        }
        print(json.dumps(doc, sort_keys=True), file=out)
    else:
        print(f"I = {list(seq)}  (initial gap {res.gap})", file=out)
        print("J = {" + ", ".join(map(str, res.positions)) + "}", file=out)
        print("values = [" + ", ".join(map(str, res.values)) + "]", file=out)
        print(f"basis ({len(basis)}):", file=out)
        for g, poly in basis:
            print(f"  {g} = {poly}", file=out)
        for s in res.trace:
            note = "" if s.offender is None else f", offender at {s.offender}, t={s.t}, prepend {s.prepended}"
            print(f"  level {s.depth}: {list(s.sequence)} gap {s.gap}{note}", file=out)
        print("closure:", "covers every entry" if covered else f"misses {list(closure.missing)}", file=out)
        for n in seq:
            if n in closure.members:
                print(f"  {n}: " + "; ".join(closure.explain(n)), file=out)
    return 0 if covered else 1


def cmd_verify(args, out) -> int:
    ids = args.checks.split(",") if args.checks else None
    try:
        reports = run_suite(ids, (args.p,), long=args.long)
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc.args[0] if exc.args else exc)) from None
    for r in reports:
        if args.format == "json":
            print(json.dumps(r.to_json(), sort_keys=True), file=out)
        else:
            print(f"{r.id:<4} p={args.p} {r.status.upper():<7} {r.ms:8.1f} ms  {DESCRIPTIONS[r.id]}", file=out)
            for line in r.detail:
                print(f"     {line}", file=out)
    return 1 if any(r.status == FAIL for r in reports) else 0


def cmd_member(args, out) -> int:
    try:
        target = parse_poly(args.expr, args.p)
        spec = SpanSpec.parse(args.tspace)
        limits = Limits.parse(args.limits) if args.limits else Limits()
    except (ExprError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    if target.is_zero():
        raise UsageError("target polynomial is zero")
    ans = span_membership(target, spec, limits)
    if args.format == "json":
        doc = {"answer": ans.answer, "diagnostic": ans.diagnostic, "instances": ans.instances,
               "rank": ans.rank, "certificate": ans.certificate.to_json() if ans.found else None}
        print(json.dumps(doc, sort_keys=True), file=out)
    else:
        print(f"{ans.answer}: {ans.diagnostic}" if ans.diagnostic else ans.answer, file=out)
        if ans.found:
            print(ans.certificate.dumps(), file=out)
    return 0 if ans.found else 1


def cmd_expand(args, out) -> int:
    try:
        poly = parse_poly(args.expr, args.p)
    except ExprError as exc:
        raise UsageError(str(exc)) from None
    if args.format == "json":
        print(json.dumps({"p": args.p, "poly": str(poly), "terms": len(poly)}, sort_keys=True), file=out)
    else:
        print(poly, file=out)
    return 0


COMMANDS = {"reduce": cmd_reduce, "verify": cmd_verify, "member": cmd_member, "expand": cmd_expand}


def dispatch(argv: Optional[List[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser(_default_p()).parse_args(argv)
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=err)
        return 2
    except ModulusError as exc:
        print(f"error: {exc}", file=err)
        return 2


def main(argv: Optional[List[str]] = None) -> int:
    try:
        return dispatch(argv)
    except SystemExit as exc:  # --help
        return exc.code if isinstance(exc.code, int) else 0


if __name__ == "__main__":
    sys.exit(main())
