"""Command-line front end.

Exit codes: 0 success, 64 usage error, 65 invalid input or domain error,
66 missing input file.  ``classify`` answers with 0 (equivalent),
1 (not equivalent) or 2 (out of scope); ``verify`` returns 1 when a check
fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .enumeration import enumerate_gentle, report_json, verify_theorems
from .invariant import compute_phi
from .normal_forms import InvariantTriple, build_family, build_normal_form, family_of, is_normal_form
from .quiver_core import (
    GentlePresentation,
    QuiverError,
    canonical_form,
    cycle_number,
    parse_quiver,
    to_dsl,
    to_json,
    validate_gentle,
)
from .reduction import DEFAULT_BUDGET, ReductionError, decide_derived_equivalence, reduce_to_normal_form
from .threads import (
    decode_thread_array,
    partition_encoding,
    relation_cycles,
    thread_array,
    threads_json,
)
from .transforms import TransformStep, apply_step, move_thread, parse_move

EX_OK = 0
EX_USAGE = 64
EX_DATAERR = 65
EX_NOINPUT = 66


@dataclass
class CommandResult:
    exit_code: int
    text: str
    payload: dict[str, Any] | None = None
    error: bool = False
    as_json: bool = False

    def render(self) -> str:
        if self.as_json and self.payload is not None:
            return json.dumps(self.payload, indent=2, ensure_ascii=False)
        return self.text


class _UsageError(Exception):
    pass


class _MissingFile(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # type: ignore[override]
        raise _UsageError(f"{self.prog}: {message}")


def _load(path: str) -> GentlePresentation:
    f = Path(path)
    if not f.is_file():
        raise _MissingFile(f"no such file: {path}")
    p = parse_quiver(f.read_text(encoding="utf-8"))
    return p if p.name else type(p)(p.quiver, p.relations, p.validated, f.stem)


# ------------------------------------------------------------------ commands


def _validate(args) -> CommandResult:
    p = _load(args.file)
    report = validate_gentle(p)
    violations = [{"condition": v.condition, "site": v.site} for v in report.violations]
    if report.ok:
        text = f"ok: {len(p.vertices)} vertices, {len(p.arrows)} arrows, cycle number {cycle_number(p)}"
        return CommandResult(EX_OK, text, {"ok": True, "cycle_number": cycle_number(p)})
    lines = [f"condition {v['condition']}: {v['site']}" for v in violations]
    return CommandResult(EX_DATAERR, "\n".join(lines), {"ok": False, "violations": violations}, error=True)


def _threads(args) -> CommandResult:
    p = _load(args.file)
    arr = thread_array(p)
    enc = partition_encoding(p)
    lines = [str(arr), f"lambda: {enc.lam}", f"gamma: {enc.gamma}"]
    for cyc in relation_cycles(p):
        lines.append("relation cycle: " + " ".join(cyc.arrows))
    return CommandResult(EX_OK, "\n".join(lines), threads_json(p))


def _phi(args) -> CommandResult:
    phi = compute_phi(_load(args.file))
    text = phi.gap() if args.gap else str(phi)
    return CommandResult(EX_OK, text, {"phi": [list(x) for x in phi.pairs], "text": str(phi)})


_STEP_WIDTH = {"V": 2, "V-": 2, "F": 2, "F-": 2, "L": 2, "L-": 2, "m": 4}


def _group_steps(words: list[str]) -> list[str]:
    """Split ``V v1 m u+ after w-`` (quoted or not) into individual steps."""
    tokens = [t for w in words for t in w.split()]
    steps = []
    while tokens:
        width = _STEP_WIDTH.get(tokens[0])
        if width is None or len(tokens) < width:
            raise _UsageError(f"cannot read a step starting at {' '.join(tokens[:4])!r}")
        steps.append(" ".join(tokens[:width]))
        tokens = tokens[width:]
    return steps


def _transform(args) -> CommandResult:
    p = _load(args.file)
    applied = []
    for text in _group_steps(args.steps):
        if text.lstrip().startswith("m "):
            arr = thread_array(p)
            arr = move_thread(arr, parse_move(text, arr))
            p = decode_thread_array(arr, p.name)
        else:
            p = apply_step(p, TransformStep.parse(text))
        applied.append(text.strip())
    payload = {"steps": applied, "result": to_json(p), "phi": str(compute_phi(p))}
    return CommandResult(EX_OK, to_dsl(p), payload)


def _parse_params(items: list[str]) -> dict[str, int]:
    out = {}
    for item in ",".join(items).split(","):
        if not item.strip():
            continue
        key, sep, value = item.partition("=")
        if not sep:
            raise _UsageError(f"parameter {item!r} is not of the form name=value")
        out[key.strip()] = int(value)
    return out


def _normal_form(args) -> CommandResult:
    if (args.phi is None) == (args.family is None):
        raise _UsageError("normal-form: give exactly one of --phi or --family")
    if args.phi is not None:
        t = InvariantTriple.parse(args.phi)
        match = family_of(t)
        p = build_normal_form(t)
    else:
        p = build_family(args.family, _parse_params(args.params or []))
        match = is_normal_form(p)
    payload = {"family": match.family, "params": match.params, "presentation": to_json(p)}
    return CommandResult(EX_OK, f"# {match}\n{to_dsl(p)}", payload)


def _classify(args) -> CommandResult:
    v = decide_derived_equivalence(_load(args.first), _load(args.second))
    words = {"equivalent": "derived equivalent", "not-equivalent": "not derived equivalent"}
    text = f"{words.get(v.verdict, 'out of scope')}: {v.reason}\nphi A: {v.phi_a}\nphi B: {v.phi_b}"
    payload = {"verdict": v.verdict, "reason": v.reason, "phi_a": str(v.phi_a), "phi_b": str(v.phi_b)}
    return CommandResult(v.exit_code, text, payload)


def _reduce(args) -> CommandResult:
    p = _load(args.file)
    try:
        trace = reduce_to_normal_form(p, args.budget)
    except ReductionError as exc:
        payload = {"error": str(exc), "notes": exc.trace.notes if exc.trace else []}
        return CommandResult(EX_DATAERR, str(exc), payload, error=True)
    data = trace.to_json()
    if args.trace:
        Path(args.trace).write_text(json.dumps(data["steps"], indent=2) + "\n", encoding="utf-8")
    count = len(trace.steps)
    lines = [f"family {trace.family}, {count} step{'' if count == 1 else 's'}"]
    lines += [str(s) for s in trace.steps]
    lines.append(to_dsl(trace.final).rstrip("\n"))
    return CommandResult(EX_OK, "\n".join(lines), data)


def _enumerate(args) -> CommandResult:
    if args.verify:
        report = verify_theorems(args.n, args.c, args.threads)
        if args.out:
            Path(args.out).write_text(report_json(report) + "\n", encoding="utf-8")
        return CommandResult(EX_OK if report.ok else 1, report.summary(), report.to_json())
    items = list(enumerate_gentle(args.n, args.c))
    keys = [canonical_form(p) for p in items]
    payload = {"n": args.n, "c": args.c, "count": len(items), "presentations": keys}
    if args.out:
        Path(args.out).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    return CommandResult(EX_OK, f"n={args.n} c={args.c}: {len(items)} presentations", payload)


def _verify(args) -> CommandResult:
    reports = [verify_theorems(n, 2, args.threads) for n in range(1, args.n + 1)]
    ok = all(r.ok for r in reports)
    text = "\n".join(r.summary() for r in reports)
    return CommandResult(EX_OK if ok else 1, text, {"ok": ok, "reports": [r.to_json() for r in reports]})


# -------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="print JSON instead of text")

    parser = _Parser(prog="gentle", description="Gentle algebras: threads, invariant, normal forms.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("validate", parents=[common], help="check the gentle conditions")
    p.add_argument("file")
    p.set_defaults(func=_validate)

    p = sub.add_parser("threads", parents=[common], help="thread array and partition encoding")
    p.add_argument("file")
    p.set_defaults(func=_threads)

    p = sub.add_parser("phi", parents=[common], help="compute the invariant")
    p.add_argument("file")
    p.add_argument("--gap", action="store_true", help="nested-list output")
    p.set_defaults(func=_phi)

    p = sub.add_parser("transform", parents=[common], help="apply steps such as 'V v1' or 'm u+ after w-'")
    p.add_argument("file")
    p.add_argument("steps", nargs="+")
    p.set_defaults(func=_transform)

    p = sub.add_parser("normal-form", parents=[common], help="build a representative")
    p.add_argument("--phi")
    p.add_argument("--family", type=int)
    p.add_argument("--params", nargs="*")
    p.set_defaults(func=_normal_form)

    p = sub.add_parser("classify", parents=[common], help="decide derived equivalence")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(func=_classify)

    p = sub.add_parser("reduce", parents=[common], help="steps to the representative")
    p.add_argument("file")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--trace", metavar="FILE")
    p.set_defaults(func=_reduce)

    p = sub.add_parser("enumerate", parents=[common], help="list presentations up to isomorphism")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-c", type=int, default=2)
    p.add_argument("--verify", action="store_true")
    p.add_argument("--out")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=_enumerate)

    p = sub.add_parser("verify", parents=[common], help="check invariant properties up to n vertices")
    p.add_argument("-n", type=int, default=4)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=_verify)
    return parser


def run(argv: list[str]) -> CommandResult:
    result = _dispatch(argv)
    result.as_json = "--json" in argv
    return result


def _dispatch(argv: list[str]) -> CommandResult:
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise _UsageError("gentle: a command is required")
        result = args.func(args)
    except _UsageError as exc:
        return CommandResult(EX_USAGE, str(exc), {"error": str(exc)}, error=True)
    except _MissingFile as exc:
        return CommandResult(EX_NOINPUT, str(exc), {"error": str(exc)}, error=True)
    except (QuiverError, ValueError) as exc:
        return CommandResult(EX_DATAERR, f"error: {exc}", {"error": str(exc)}, error=True)
    return result


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    result = run(argv)
    stream = sys.stderr if result.error else sys.stdout
    print(result.render(), file=stream)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
