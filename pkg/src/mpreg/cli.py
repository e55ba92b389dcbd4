"""Command line interface.

Exit codes: 0 success, 2 parse/config/range problem, 3 inconsistent verdict,
4 precondition violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Optional

from .bundles import (
    ArityError,
    Bundle,
    ModelError,
    ParseError,
    format_bundle,
    format_space,
    parse_bundle,
)
from .cohomology import build_table
from .harness import (
    ConfigError,
    EnumerationConfig,
    default_jobs,
    load_config,
    run_verification,
)
from .regularity import DEFINITIONS, reg
from .splitting import (
    PreconditionError,
    TheoremId,
    acm_witnesses,
    classify_form,
    detect_extremal_summand,
    is_acm,
    verify_theorem,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INCONSISTENT = 3
EXIT_PRECONDITION = 4


def _parse_twist_box(value: str, num_factors: int) -> tuple[tuple[int, int], ...]:
    parts = [p.strip() for p in value.split(",")]
    boxes = []
    for part in parts:
        bounds = part.split("..")
        if len(bounds) != 2:
            raise ConfigError(f"expected a range like -2..2, got {part!r}")
        try:
            lo, hi = int(bounds[0]), int(bounds[1])
        except ValueError as exc:
            raise ConfigError(f"non-integer bound in {part!r}") from exc
        if lo > hi:
            raise ConfigError(f"empty twist range {part!r}")
        boxes.append((lo, hi))
    if len(boxes) == 1 and num_factors > 1:
        boxes = boxes * num_factors
    if len(boxes) != num_factors:
        raise ConfigError(
            f"twist ranges list {len(boxes)} factors but the space has {num_factors}"
        )
    return tuple(boxes)


def _load_bundle(args) -> Bundle:
    _, bundle = parse_bundle(args.space, args.bundle)
    return bundle


def _witness_json(w) -> dict:
    return {"i": w.i, "k": list(w.k), "t": w.t, "dim": str(w.dim), "required": w.required}


def _emit(payload: dict, lines: list[str], fmt: str, out) -> None:
    if fmt == "json":
        json.dump(payload, out, indent=2, sort_keys=True)
        out.write("\n")
    else:
        out.write("\n".join(lines) + "\n")


def cmd_cohomology(args, out) -> int:
    bundle = _load_bundle(args)
    box = _parse_twist_box(args.twist_range, bundle.space.num_factors)
    table = build_table(bundle, box)
    entries = sorted(table.entries.items())
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        s = bundle.space.num_factors
        writer.writerow(["i"] + [f"t_{j + 1}" for j in range(s)] + ["dim"])
        for (i, tvec), dim in entries:
            writer.writerow([i, *tvec, dim])
        out.write(buf.getvalue())
        return EXIT_OK
    payload = {
        "space": list(bundle.space.dims),
        "bundle": format_bundle(bundle),
        "entries": [
            {"i": i, "t": list(tvec), "dim": str(dim)} for (i, tvec), dim in entries
        ],
    }
    lines = [
        f"space: {format_space(bundle.space)}",
        f"bundle: {format_bundle(bundle)}",
    ]
    if entries:
        for (i, tvec), dim in entries:
            lines.append(f"h^{i}{tuple(tvec)} = {dim}")
    else:
        lines.append("all groups in the requested box vanish")
    _emit(payload, lines, args.format, out)
    return EXIT_OK


def cmd_reg(args, out) -> int:
    bundle = _load_bundle(args)
    report = reg(bundle, args.definition)
    payload = {
        "space": list(bundle.space.dims),
        "bundle": format_bundle(bundle),
        "definition": report.definition,
        "value": report.value,
        "monotone_checked": report.monotone_checked,
        "failures": [
            {"i": i, "k": list(k), "dim": str(dim)} for i, k, dim in report.failures
        ],
    }
    lines = [
        f"bundle: {format_bundle(bundle)} on {format_space(bundle.space)}",
        f"Reg ({report.definition}) = {report.value}",
        f"monotone step checked: {report.monotone_checked}",
    ]
    _emit(payload, lines, args.format, out)
    return EXIT_OK


def cmd_acm(args, out) -> int:
    bundle = _load_bundle(args)
    verdict = is_acm(bundle)
    witnesses = [] if verdict else acm_witnesses(bundle)
    payload = {
        "space": list(bundle.space.dims),
        "bundle": format_bundle(bundle),
        "acm": verdict,
        "witnesses": [_witness_json(w) for w in witnesses],
    }
    lines = [f"bundle: {format_bundle(bundle)} on {format_space(bundle.space)}"]
    lines.append("ACM: yes" if verdict else "ACM: no")
    for w in witnesses:
        lines.append(f"  witness: h^{w.i} at t={w.t} offset {w.k} has dim {w.dim}")
    _emit(payload, lines, args.format, out)
    return EXIT_OK


def _verdict_payload(bundle: Bundle, verdict) -> dict:
    return {
        "theorem": verdict.theorem.value,
        "space": list(bundle.space.dims),
        "bundle": format_bundle(bundle),
        "applicable": verdict.applicable,
        "reason": verdict.reason,
        "condition": verdict.condition_holds,
        "form": verdict.form_holds,
        "consistent": verdict.consistent,
        "witnesses": [_witness_json(w) for w in verdict.witnesses],
        "detected": [t.label for t in verdict.detected],
        "detector_agrees": verdict.detector_agrees,
    }


def cmd_check(args, out) -> int:
    bundle = _load_bundle(args)
    verdict = verify_theorem(bundle, TheoremId(args.theorem))
    payload = _verdict_payload(bundle, verdict)
    lines = [
        f"check {verdict.theorem.value} for {format_bundle(bundle)} on "
        f"{format_space(bundle.space)}"
    ]
    if not verdict.applicable:
        lines.append(f"not applicable: {verdict.reason}")
        _emit(payload, lines, args.format, out)
        return EXIT_PRECONDITION
    lines.append(f"condition: {verdict.condition_holds}")
    lines.append(f"form: {verdict.form_holds}")
    lines.append(f"consistent: {verdict.consistent}")
    for w in verdict.witnesses:
        flag = "" if w.required else " (informational)"
        lines.append(f"  witness: i={w.i} k={w.k} t={w.t} dim={w.dim}{flag}")
    if verdict.detected:
        lines.append("detected: " + ", ".join(t.label for t in verdict.detected))
    _emit(payload, lines, args.format, out)
    return EXIT_OK if verdict.consistent else EXIT_INCONSISTENT


def cmd_classify(args, out) -> int:
    bundle = _load_bundle(args)
    from .bundles import rank as bundle_rank

    report = reg(bundle)
    forms = {}
    for tid in TheoremId:
        try:
            forms[tid.value] = classify_form(bundle, tid)
        except ModelError:
            continue
    detected = []
    if report.value == 0:
        detected = [t.label for t in detect_extremal_summand(bundle)]
    payload = {
        "space": list(bundle.space.dims),
        "bundle": format_bundle(bundle),
        "rank": bundle_rank(bundle),
        "reg": report.value,
        "forms": forms,
        "detected": detected,
    }
    lines = [
        f"bundle: {format_bundle(bundle)} on {format_space(bundle.space)}",
        f"rank: {payload['rank']}",
        f"Reg: {report.value}",
        "forms: " + ", ".join(f"{k}={v}" for k, v in sorted(forms.items())),
    ]
    if detected:
        lines.append("detected: " + ", ".join(detected))
    _emit(payload, lines, args.format, out)
    return EXIT_OK


def cmd_verify_paper(args, out) -> int:
    if args.config:
        cfg = load_config(args.config)
    else:
        cfg = EnumerationConfig(spaces=("P1xP1", "P1xP2"))
    if args.theorem:
        cfg = EnumerationConfig(
            **{**cfg.__dict__, "theorems": tuple(args.theorem)}
        )
    jobs = default_jobs(args.jobs)
    if jobs != cfg.jobs:
        cfg = EnumerationConfig(**{**cfg.__dict__, "jobs": jobs})
    report = run_verification(cfg)
    payload = {
        "spaces": list(cfg.spaces),
        "theorems": list(cfg.theorems),
        "total_bundles": report.total_bundles,
        "elapsed_seconds": round(report.elapsed_seconds, 3),
        "ok": report.ok,
        "per_theorem": {
            tid: {
                "applicable": st.applicable,
                "not_applicable": st.not_applicable,
                "consistent": st.consistent,
                "inconsistent": st.inconsistent,
                "samples": st.samples,
            }
            for tid, st in report.per_theorem.items()
        },
        "findings": report.findings,
    }
    lines = [
        f"spaces: {', '.join(cfg.spaces)}",
        f"bundles checked: {report.total_bundles}",
    ]
    for tid, st in report.per_theorem.items():
        lines.append(
            f"{tid}: applicable={st.applicable} consistent={st.consistent} "
            f"inconsistent={st.inconsistent}"
        )
    lines.append(f"findings: {len(report.findings)}")
    lines.append("ok" if report.ok else "INCONSISTENCIES FOUND")
    _emit(payload, lines, args.format, out)
    return EXIT_OK if report.ok else EXIT_INCONSISTENT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mpreg",
        description=(
            "Exact cohomology, regularity and splitting checks for direct sums "
            "of twisted line and cotangent-power sheaves on products of "
            "projective spaces."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def bundle_args(p):
        p.add_argument("--space", required=True, help="space, e.g. P2xP3")
        p.add_argument(
            "--bundle",
            required=True,
            help="bundle, e.g. 'O(1,0) + O(0)*W1(2)' with optional '@(t1,t2)' twist",
        )

    p = sub.add_parser("cohomology", help="tabulate h^i over a box of twists")
    bundle_args(p)
    p.add_argument(
        "--twist-range",
        required=True,
        help="per-factor ranges; write --twist-range=-3..3,-2..2 when a "
        "bound is negative",
    )
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.set_defaults(func=cmd_cohomology)

    p = sub.add_parser("reg", help="compute the regularity value")
    bundle_args(p)
    p.add_argument("--definition", choices=DEFINITIONS, default="paper")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_reg)

    p = sub.add_parser("acm", help="decide the ACM property")
    bundle_args(p)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_acm)

    p = sub.add_parser("check", help="run one splitting check")
    bundle_args(p)
    p.add_argument(
        "--theorem",
        required=True,
        type=str.upper,
        choices=[t.value for t in TheoremId],
    )
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("classify", help="canonical structure and form membership")
    bundle_args(p)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("verify-paper", help="run the enumeration harness")
    p.add_argument("--config", help="path to a key = value configuration file")
    p.add_argument(
        "--theorem",
        action="append",
        type=str.upper,
        choices=[t.value for t in TheoremId],
        help="restrict to one or more check ids (repeatable)",
    )
    p.add_argument("--jobs", type=int, default=None, help="worker processes")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_verify_paper)

    return parser


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, sys.stdout)
    except PreconditionError as exc:
        print(f"precondition violation: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (ParseError, ConfigError, ArityError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
