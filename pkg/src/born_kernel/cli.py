"""Command-line front end.

Subcommands: check (axiom checks on a family + ordering), derive
(construct and verify the representing measure), demo-erasure (two-game
reachable sets and the p-sweep), canon (two-dimensional normal form of
a quadruple), gen-rich (emit a rich family and its induced ordering).

Exit codes: 0 success, 1 domain failure (axiom violation or failed
precondition), 2 malformed input or usage error.  Reports are
deterministic: identical input bytes produce identical report bytes.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from fractions import Fraction
from pathlib import Path

from .erasure import GameSpec, reachable_set, sets_equal
from .formats import (
    FormatError,
    assignment_to_json,
    canonical_dumps,
    digest_bytes,
    event_ref_to_json,
    family_from_json,
    family_to_json,
    ordering_from_json,
    ordering_to_json,
    quadruple_from_json,
    quadruple_to_json,
)
from .neutrality import canonical_form, canonical_quadruple
from .numeric import DEFAULT_POLICY, NumericPolicy
from .ordering import induced_ordering, run_all_checks
from .representation import (
    MissingUniformMeasurement,
    NonconformingDenominator,
    PreconditionViolated,
    SizeLimitExceeded,
    derive_representation,
    generate_rich_family,
    verify_representation,
)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_INPUT = 2


class InputError(Exception):
    """Anything wrong with the inputs themselves: maps to exit 2."""


class DomainFailure(Exception):
    """Well-formed inputs, failed mathematics: maps to exit 1."""

    def __init__(self, message: str, report: dict | None = None):
        super().__init__(message)
        self.report = report


def _read_bytes(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}")


def _parse_json(raw: bytes, path: str):
    try:
        return json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        if isinstance(exc, json.JSONDecodeError):
            raise InputError(
                f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: "
                f"{exc.msg}"
            )
        raise InputError(f"{path}: not valid UTF-8")


def _load_policy(path: str | None) -> NumericPolicy:
    if path is None:
        return DEFAULT_POLICY
    doc = _parse_json(_read_bytes(path), path)
    if not isinstance(doc, dict):
        raise InputError(f"{path}: numeric policy must be a JSON object")
    allowed = {"norm_tol", "projector_tol", "eigenvalue_tol", "rational_tol"}
    unknown = set(doc) - allowed
    if unknown:
        raise InputError(f"{path}: unknown policy fields {sorted(unknown)}")
    try:
        return replace(DEFAULT_POLICY, **{k: float(v) for k, v in doc.items()})
    except (TypeError, ValueError) as exc:
        raise InputError(f"{path}: bad policy value ({exc})")


def _emit(report: dict, text_lines: list[str], as_json: bool) -> None:
    if as_json:
        sys.stdout.write(canonical_dumps(report))
    else:
        sys.stdout.write("\n".join(text_lines) + "\n")


def _witness_json(witness: tuple) -> list:
    return [
        event_ref_to_json(item) if hasattr(item, "measurement_id") else item
        for item in witness
    ]


def cmd_check(args) -> int:
    family_raw = _read_bytes(args.family)
    ordering_raw = _read_bytes(args.ordering)
    try:
        family = family_from_json(_parse_json(family_raw, args.family))
        ordering = ordering_from_json(
            _parse_json(ordering_raw, args.ordering), family
        )
    except FormatError as exc:
        raise InputError(str(exc))
    reports = run_all_checks(ordering)
    verdicts = []
    for rep in reports:
        verdicts.append(
            {
                "check": rep.axiom,
                "result": "pass" if rep.satisfied else "fail",
                "witness_count": len(rep.witnesses),
                "witnesses": [_witness_json(w) for w in rep.witnesses],
            }
        )
    report = {
        "schema": "v1",
        "command": "check",
        "inputs_digest": digest_bytes(family_raw, ordering_raw),
        "verdicts": verdicts,
    }
    lines = [
        f"check {v['check']}: {v['result']} ({v['witness_count']} witnesses)"
        for v in verdicts
    ]
    _emit(report, lines, not args.text)
    return EXIT_OK if all(r.satisfied for r in reports) else EXIT_DOMAIN


def cmd_derive(args) -> int:
    family_raw = _read_bytes(args.family)
    ordering_raw = _read_bytes(args.ordering)
    try:
        family = family_from_json(_parse_json(family_raw, args.family))
        ordering = ordering_from_json(
            _parse_json(ordering_raw, args.ordering), family
        )
    except FormatError as exc:
        raise InputError(str(exc))
    digest = digest_bytes(family_raw, ordering_raw)
    try:
        assignment = derive_representation(ordering, args.K)
    except PreconditionViolated as exc:
        raise DomainFailure(
            f"precondition failed: {exc.axiom}",
            {
                "schema": "v1",
                "command": "derive",
                "inputs_digest": digest,
                "verdicts": [
                    {"check": f"precondition:{exc.axiom}", "result": "fail",
                     "witness_count": 0, "witnesses": []}
                ],
            },
        )
    except (MissingUniformMeasurement, NonconformingDenominator) as exc:
        raise DomainFailure(
            f"precondition failed: {type(exc).__name__}",
            {
                "schema": "v1",
                "command": "derive",
                "inputs_digest": digest,
                "verdicts": [
                    {"check": f"precondition:{type(exc).__name__}",
                     "result": "fail", "witness_count": 0, "witnesses": []}
                ],
            },
        )
    ok, witnesses = verify_representation(assignment, ordering)
    doc = assignment_to_json(assignment)
    Path(args.out).write_text(canonical_dumps(doc), encoding="utf-8")
    report = {
        "schema": "v1",
        "command": "derive",
        "inputs_digest": digest,
        "verdicts": [
            {
                "check": "representation",
                "result": "pass" if ok else "fail",
                "witness_count": len(witnesses),
                "witnesses": [_witness_json(w) for w in witnesses],
            }
        ],
        "artifacts": {"assignment_path": str(args.out), "K": args.K},
    }
    lines = [
        f"derive: wrote {args.out}",
        f"check representation: {'pass' if ok else 'fail'} "
        f"({len(witnesses)} witnesses)",
    ]
    _emit(report, lines, not args.text)
    return EXIT_OK if ok else EXIT_DOMAIN


def _canonical_state_json(key: tuple) -> list[dict]:
    out = []
    for result, no_detail, detail, reward, weight in key:
        out.append(
            {
                "result": result,
                "detail": None if no_detail else detail,
                "reward": bool(reward),
                "weight": weight,
            }
        )
    return out


def cmd_demo_erasure(args) -> int:
    if args.p_den < 1 or not (0 < args.p_num < args.p_den):
        raise InputError(
            f"p = {args.p_num}/{args.p_den} is not a probability strictly "
            "between 0 and 1"
        )
    if args.index_range < 1:
        raise InputError("index range must be at least 1")
    p = Fraction(args.p_num, args.p_den)
    prep = [("up", p), ("down", 1 - p)]
    game1 = GameSpec(frozenset({"up"}))
    game2 = GameSpec(frozenset({"down"}))
    set1 = reachable_set(prep, game1, args.index_range)
    set2 = reachable_set(prep, game2, args.index_range)
    equal = sets_equal(set1, set2)
    sweep = []
    for k in range(1, 16):
        pk = Fraction(k, 16)
        prep_k = [("up", pk), ("down", 1 - pk)]
        sweep.append(
            {
                "p": f"{k}/16",
                "equal": sets_equal(
                    reachable_set(prep_k, game1, args.index_range),
                    reachable_set(prep_k, game2, args.index_range),
                ),
            }
        )
    report = {
        "schema": "v1",
        "command": "demo-erasure",
        "inputs_digest": digest_bytes(
            f"{args.p_num}/{args.p_den}:{args.index_range}".encode()
        ),
        "verdicts": [
            {
                "check": "reachable-sets-equal",
                "result": "pass" if equal else "fail",
                "witness_count": 0,
                "witnesses": [],
            }
        ],
        "artifacts": {
            "p": f"{args.p_num}/{args.p_den}",
            "index_range": args.index_range,
            "game1_states": [
                _canonical_state_json(k) for k in sorted(set1.states)
            ],
            "game2_states": [
                _canonical_state_json(k) for k in sorted(set2.states)
            ],
            "sweep": sweep,
        },
    }
    lines = [
        f"p = {args.p_num}/{args.p_den}, index range {args.index_range}",
        f"game 1 reaches {len(set1)} states, game 2 reaches {len(set2)} states",
        f"reachable sets equal: {'yes' if equal else 'no'}",
        "",
        "p-sweep (k/16):",
    ]
    for entry in sweep:
        lines.append(f"  p = {entry['p']:>5}: {'equal' if entry['equal'] else 'different'}")
    _emit(report, lines, not args.text)
    return EXIT_OK


def _round12(doc):
    """Clamp every float in a JSON document to 12 significant digits.

    The canon artifact is reported at print precision so that
    equivalent quadruples produce byte-identical reports.
    """
    if isinstance(doc, float):
        return float(f"{doc:.12g}")
    if isinstance(doc, list):
        return [_round12(x) for x in doc]
    if isinstance(doc, dict):
        return {k: _round12(v) for k, v in doc.items()}
    return doc


def cmd_canon(args) -> int:
    quad_raw = _read_bytes(args.quad)
    policy = _load_policy(args.numeric_policy)
    try:
        quadruple = quadruple_from_json(_parse_json(quad_raw, args.quad), policy)
    except FormatError as exc:
        raise InputError(str(exc))
    form = canonical_form(quadruple, policy=policy)
    canon = canonical_quadruple(quadruple, policy=policy)
    report = {
        "schema": "v1",
        "command": "canon",
        "inputs_digest": digest_bytes(quad_raw),
        "verdicts": [
            {"check": "canonicalize", "result": "pass", "witness_count": 0,
             "witnesses": []}
        ],
        "artifacts": {
            "weight": f"{form.weight_value:.12g}",
            "c": f"{form.c:.12g}",
            "d": f"{form.d:.12g}",
            "canonical_quadruple": _round12(quadruple_to_json(canon)),
        },
    }
    lines = [
        f"weight = {form.weight_value:.12g}",
        f"c = {form.c:.12g}",
        f"d = {form.d:.12g}",
        canonical_dumps(_round12(quadruple_to_json(canon))).rstrip("\n"),
    ]
    _emit(report, lines, not args.text)
    return EXIT_OK


def cmd_gen_rich(args) -> int:
    if args.K < 1 or args.max_outcomes < 1:
        raise InputError("K and max outcomes must be positive")
    try:
        family = generate_rich_family(args.K, args.max_outcomes)
    except SizeLimitExceeded as exc:
        raise DomainFailure(
            str(exc),
            {
                "schema": "v1",
                "command": "gen-rich",
                "inputs_digest": digest_bytes(
                    f"{args.K}:{args.max_outcomes}".encode()
                ),
                "verdicts": [
                    {"check": "size-cap", "result": "fail", "witness_count": 0,
                     "witnesses": []}
                ],
            },
        )
    ordering = induced_ordering(family)
    out = Path(args.out)
    ordering_out = (
        Path(args.ordering_out)
        if args.ordering_out
        else out.with_suffix(".ordering.json")
    )
    out.write_text(canonical_dumps(family_to_json(family)), encoding="utf-8")
    ordering_out.write_text(
        canonical_dumps(ordering_to_json(ordering)), encoding="utf-8"
    )
    report = {
        "schema": "v1",
        "command": "gen-rich",
        "inputs_digest": digest_bytes(f"{args.K}:{args.max_outcomes}".encode()),
        "verdicts": [
            {"check": "size-cap", "result": "pass", "witness_count": 0,
             "witnesses": []}
        ],
        "artifacts": {
            "family_path": str(out),
            "ordering_path": str(ordering_out),
            "measurements": len(family.measurements),
            "K": args.K,
            "max_outcomes": args.max_outcomes,
        },
    }
    lines = [
        f"gen-rich: {len(family.measurements)} measurements "
        f"(K={args.K}, max outcomes={args.max_outcomes})",
        f"wrote family to {out}",
        f"wrote induced ordering to {ordering_out}",
    ]
    _emit(report, lines, not args.text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="born-kernel",
        description=(
            "Check likelihood orderings against the rationality axioms, "
            "derive and verify representing probability measures, and run "
            "the erasure and canonical-form demonstrations."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_output_flags(p):
        mode = p.add_mutually_exclusive_group()
        mode.add_argument(
            "--json", dest="text", action="store_false",
            help="emit a JSON report (default)",
        )
        mode.add_argument(
            "--text", dest="text", action="store_true",
            help="emit a plain-text report",
        )
        p.set_defaults(text=False)

    p = sub.add_parser("check", help="run the four axiom checks")
    p.add_argument("--family", required=True, help="family JSON path")
    p.add_argument("--ordering", required=True, help="ordering JSON path")
    add_output_flags(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("derive", help="derive and verify the representing measure")
    p.add_argument("--family", required=True, help="family JSON path")
    p.add_argument("--ordering", required=True, help="ordering JSON path")
    p.add_argument("-K", type=int, required=True, help="grid constant")
    p.add_argument("--out", required=True, help="assignment JSON output path")
    add_output_flags(p)
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("demo-erasure", help="two-game erasure demonstration")
    p.add_argument("--p-num", type=int, required=True, help="reward weight numerator")
    p.add_argument("--p-den", type=int, required=True, help="reward weight denominator")
    p.add_argument(
        "--index-range", type=int, default=4,
        help="number of erasure microstates per branch (default 4)",
    )
    add_output_flags(p)
    p.set_defaults(func=cmd_demo_erasure)

    p = sub.add_parser("canon", help="two-dimensional normal form of a quadruple")
    p.add_argument("--quad", required=True, help="quadruple JSON path")
    p.add_argument(
        "--numeric-policy", default=None,
        help="JSON file overriding float tolerances",
    )
    add_output_flags(p)
    p.set_defaults(func=cmd_canon)

    p = sub.add_parser("gen-rich", help="emit a rich family and its induced ordering")
    p.add_argument("-K", type=int, required=True, help="grid constant")
    p.add_argument("--max-outcomes", type=int, required=True)
    p.add_argument("--out", required=True, help="family JSON output path")
    p.add_argument(
        "--ordering-out", default=None,
        help="ordering JSON output path (default: <out>.ordering.json)",
    )
    add_output_flags(p)
    p.set_defaults(func=cmd_gen_rich)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DomainFailure as exc:
        if exc.report is not None and not args.text:
            sys.stdout.write(canonical_dumps(exc.report))
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
