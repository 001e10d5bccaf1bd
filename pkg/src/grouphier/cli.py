"""Command-line front end.

    grouphier graph pow:genq:3 --format json
    grouphier check thm1 cyclic:6
    grouphier check thm4 --level 4
    grouphier suite --max-level 5 --format json

Exit codes: ``graph`` returns 2 on a spec parse error and 3 on a build
error; ``check`` returns 0 when the claim holds, 1 when it does not and 2 on
usage errors; ``suite`` returns 0 when every row passes and 1 otherwise.
Relative ``--out`` paths are resolved against ``$GROUPHIER_OUTPUT_DIR`` when
that variable is set.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import theorems
from .errors import GroupHierError
from .export import FORMATS, render
from .families import build_family, family_size, parse_family
from .graphs import Kind, build_graph
from .suite import MIN_LEVEL, run_suite, suite_json, suite_text

DEFAULT_LEVEL_CAP = 10
OUTPUT_DIR_ENV = "GROUPHIER_OUTPUT_DIR"

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUILD = 0, 1, 2, 3

LEVEL_CLAIMS = ("thm4", "thm5", "cor32", "cor34", "chain")
FAMILY_CLAIMS = ("thm1", "thm2", "thm3")
CLAIMS = FAMILY_CLAIMS + LEVEL_CLAIMS + ("prop33",)


class UsageError(Exception):
    pass


def parse_graph_spec(text: str):
    """Split ``<kind>:<family>`` into a :class:`Kind` and a family spec."""
    kind, sep, family = text.partition(":")
    if not sep:
        raise UsageError(f"expected <kind>:<family>, got {text!r}")
    try:
        kind = Kind(kind)
    except ValueError:
        raise UsageError(f"unknown graph kind {kind!r}; use pow, epow or com") from None
    try:
        return kind, parse_family(family)
    except GroupHierError as exc:
        raise UsageError(str(exc)) from None


def _guard_size(spec, cap: int):
    limit = 2 ** (cap + 1)
    size = family_size(spec)
    if size > limit:
        raise UsageError(f"resource guard: {spec} has {size} elements, above {limit} (raise --level-cap)")


def _guard_level(level: int, cap: int):
    if level < MIN_LEVEL:
        raise UsageError(f"level must be >= {MIN_LEVEL}")
    if level > cap:
        raise UsageError(f"resource guard: level {level} exceeds cap {cap} (raise --level-cap)")


def _resolve_out(path: str) -> Path:
    p = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    return p


def _emit(text: str, out):
    if out is None:
        sys.stdout.write(text)
    else:
        p = _resolve_out(out)
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(text, encoding="utf-8")


def cmd_graph(args) -> int:
    try:
        kind, spec = parse_graph_spec(args.spec)
        _guard_size(spec, args.level_cap)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        g = build_graph(build_family(spec), kind)
    except GroupHierError as exc:
        print(f"error: cannot build {args.spec}: {exc}", file=sys.stderr)
        return EXIT_BUILD
    _emit(render(g, args.format), args.out)
    return EXIT_OK


def _verdict_text(d: dict) -> str:
    lines = [f"{d['claim']} on {d['family']}"]
    lines.append(f"  graphs equal: {d['graphs_equal']}")
    if d["missing_edge"]:
        lines.append(f"  missing edge: {d['missing_edge'][0]} -- {d['missing_edge'][1]}")
    ob = d["obstruction"]
    if ob:
        primes = f"p={ob['p']}" + (f", q={ob['q']}" if "q" in ob else "")
        lines.append(f"  obstruction: {ob['kind']} ({ob['x']}, {ob['y']}) {primes}")
    else:
        lines.append("  obstruction: none")
    lines.append(f"  consistent: {d['consistent']}")
    return "\n".join(lines) + "\n"


def _bijection_text(d: dict) -> str:
    lines = [f"{d['claim']} level {d['level']}: {d['source']} -> {d['target']}: {d['status']}"]
    for side in ("source", "target"):
        sig = d[f"{side}_signature"]
        shown = f"({sig['u']}, {{{', '.join(map(str, sig['cliques']))}}})" if sig else "not recognized"
        lines.append(f"  {side} signature: {shown}")
    if d["counterexample"]:
        lines.append(f"  counterexample: {d['counterexample']}")
    return "\n".join(lines) + "\n"


def _run_check(args):
    claim = args.claim
    if claim in FAMILY_CLAIMS:
        if not args.target:
            raise UsageError(f"{claim} needs a family, e.g. `check {claim} cyclic:6`")
        try:
            spec = parse_family(args.target)
        except GroupHierError as exc:
            raise UsageError(str(exc)) from None
        _guard_size(spec, args.level_cap)
        view = build_family(spec)
        if not view.closed:
            raise UsageError(f"{claim} needs a finite group, not the window {spec}")
        check = {"thm1": theorems.check_thm1, "thm2": theorems.check_thm2, "thm3": theorems.check_thm3}[claim]
        d = check(view).as_dict()
        return d, d["consistent"], _verdict_text(d)
    if claim == "prop33":
        window = None
        if args.target:
            try:
                window = parse_family(args.target)
            except GroupHierError as exc:
                raise UsageError(str(exc)) from None
            if not isinstance(window, theorems.InfiniteQuaternionWindow):
                raise UsageError("prop33 takes a qinf window, e.g. qinf:@params.txt")
        d = theorems.qinf_strictness(window)
        text = (
            f"prop33 on {d['family']}\n"
            f"  pow < epow: {d['pow_epow']['status']} witness {d['pow_epow']['witness']}\n"
            f"  epow < com: {d['epow_com']['status']} witness {d['epow_com']['witness']}\n"
        )
        return d, d["passed"], text
    if args.level is None:
        raise UsageError(f"{claim} needs --level")
    _guard_level(args.level, args.level_cap)
    n = args.level
    if claim in ("thm4", "thm5"):
        report = (theorems.theorem4_witness if claim == "thm4" else theorems.theorem5_witness)(n)
        d = report.as_dict()
        return d, report.passed, _bijection_text(d)
    if claim == "chain":
        ok = theorems.restriction_consistency(args.chain, args.kind, n)
        d = {"claim": "chain", "chain": args.chain, "kind": args.kind, "level": n, "passed": ok}
        return d, ok, f"chain {args.chain} {args.kind} level {n}: {'PASS' if ok else 'FAIL'}\n"
    d = theorems.cor32(n) if claim == "cor32" else theorems.cor34(n)
    return d, d["passed"], json.dumps(d, indent=1) + "\n"


def cmd_check(args) -> int:
    try:
        d, ok, text = _run_check(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GroupHierError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(json.dumps(d, indent=1, sort_keys=True) + "\n" if args.json else text)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_suite(args) -> int:
    try:
        _guard_level(args.max_level, args.level_cap)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = run_suite(args.max_level)
    _emit(suite_json(report) if args.format == "json" else suite_text(report), args.out)
    if not report["passed"]:
        f = report["first_failure"]
        print(f"FAILED: criterion {f['criterion']} {f['claim']} ({f['target']})", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="grouphier", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_cap(p):
        p.add_argument("--level-cap", type=int, default=DEFAULT_LEVEL_CAP,
                       help="largest truncation level accepted (default %(default)s)")

    p = sub.add_parser("graph", help="build and export one graph")
    p.add_argument("spec", help="<kind>:<family>, e.g. pow:genq:3 or com:dinf:0..7")
    p.add_argument("--format", choices=FORMATS, default="json")
    p.add_argument("--out", help="output path (default: stdout)")
    add_cap(p)
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("check", help="check one claim")
    p.add_argument("claim", choices=CLAIMS)
    p.add_argument("target", nargs="?", help="family for thm1-3, optional qinf window for prop33")
    p.add_argument("--level", type=int)
    p.add_argument("--chain", choices=("lq", "ld"), default="lq")
    p.add_argument("--kind", choices=[k.value for k in Kind], default="pow")
    p.add_argument("--json", action="store_true", help="print the machine-readable report")
    add_cap(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("suite", help="run the full verification matrix")
    p.add_argument("--max-level", type=int, default=5)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out", help="output path (default: stdout)")
    add_cap(p)
    p.set_defaults(func=cmd_suite)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
