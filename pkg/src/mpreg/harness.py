"""Enumeration harness: generate families of bundles, run the splitting
checks over them, and aggregate agreement statistics."""

from __future__ import annotations

import itertools
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .bundles import (
    ArityError,
    Bundle,
    Cotangent,
    Line,
    ModelError,
    ParseError,
    Space,
    format_bundle,
    format_space,
    make_bundle,
    make_summand,
    parse_space,
)
from .regularity import is_regular_at
from .splitting import TheoremId, is_acm, verify_theorem

ALL_THEOREMS = tuple(t.value for t in TheoremId)


class ConfigError(ModelError):
    pass


@dataclass(frozen=True)
class EnumerationConfig:
    spaces: tuple[str, ...]
    degree_min: int = -2
    degree_max: int = 2
    cotangent: bool = False
    cot_twist_min: int = -2
    cot_twist_max: int = 2
    max_summands: int = 2
    theorems: tuple[str, ...] = ALL_THEOREMS
    jobs: int = 1

    def __post_init__(self):
        if self.degree_min > self.degree_max:
            raise ConfigError("empty degree range")
        if self.cot_twist_min > self.cot_twist_max:
            raise ConfigError("empty cotangent twist range")
        if self.max_summands < 1:
            raise ConfigError("max_summands must be at least 1")
        if self.jobs < 1:
            raise ConfigError("jobs must be at least 1")
        for t in self.theorems:
            if t not in ALL_THEOREMS:
                raise ConfigError(f"unknown check id {t!r}")


def _parse_range(value: str) -> tuple[int, int]:
    parts = value.split("..")
    if len(parts) != 2:
        raise ConfigError(f"expected a range like -2..2, got {value!r}")
    try:
        lo, hi = int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise ConfigError(f"non-integer range bound in {value!r}") from exc
    if lo > hi:
        raise ConfigError(f"empty range {value!r}")
    return lo, hi


_BOOL = {"on": True, "true": True, "1": True, "off": False, "false": False, "0": False}


def parse_config_text(text: str) -> EnumerationConfig:
    """Parse a key = value configuration, one setting per line."""
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {raw!r}")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key == "spaces":
            parts = [p.strip() for p in val.split(",") if p.strip()]
            if not parts:
                raise ConfigError(f"line {lineno}: no spaces listed")
            for p in parts:
                try:
                    parse_space(p)
                except ParseError as exc:
                    raise ConfigError(
                        f"line {lineno}: bad space {p!r}: {exc}"
                    ) from exc
            values["spaces"] = tuple(parts)
        elif key == "degrees":
            values["degree_min"], values["degree_max"] = _parse_range(val)
        elif key == "cotangent":
            if val.lower() not in _BOOL:
                raise ConfigError(f"line {lineno}: expected on/off, got {val!r}")
            values["cotangent"] = _BOOL[val.lower()]
        elif key == "cotangent_twists":
            values["cot_twist_min"], values["cot_twist_max"] = _parse_range(val)
        elif key == "max_summands":
            try:
                values["max_summands"] = int(val)
            except ValueError as exc:
                raise ConfigError(f"line {lineno}: bad integer {val!r}") from exc
        elif key == "theorems":
            values["theorems"] = tuple(p.strip() for p in val.split(",") if p.strip())
        elif key == "jobs":
            try:
                values["jobs"] = int(val)
            except ValueError as exc:
                raise ConfigError(f"line {lineno}: bad integer {val!r}") from exc
        else:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
    if "spaces" not in values:
        raise ConfigError("configuration must list at least one space")
    return EnumerationConfig(**values)


def load_config(path: str) -> EnumerationConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config_text(fh.read())


# ---------------------------------------------------------------------------
# enumeration


def enumerate_atoms(n: int, cfg: EnumerationConfig):
    for a in range(cfg.degree_min, cfg.degree_max + 1):
        yield Line(a)
    if cfg.cotangent:
        for p in range(1, n):
            for t in range(cfg.cot_twist_min, cfg.cot_twist_max + 1):
                yield Cotangent(p, t)


def enumerate_summands(space: Space, cfg: EnumerationConfig):
    per_factor = [list(enumerate_atoms(n, cfg)) for n in space.dims]
    for atoms in itertools.product(*per_factor):
        yield make_summand(space, atoms)


def enumerate_bundles(space: Space, cfg: EnumerationConfig):
    """All bundles with up to max_summands summands, one per multiset."""
    summands = sorted(
        enumerate_summands(space, cfg),
        key=lambda s: tuple((a.degree, -1) if isinstance(a, Line) else (a.twist, a.p) for a in s.atoms),
    )
    for size in range(1, cfg.max_summands + 1):
        for combo in itertools.combinations_with_replacement(summands, size):
            yield make_bundle(space, combo)


# ---------------------------------------------------------------------------
# verification runs


@dataclass
class TheoremStats:
    applicable: int = 0
    not_applicable: int = 0
    consistent: int = 0
    inconsistent: int = 0
    samples: list = field(default_factory=list)


@dataclass
class RunReport:
    config: EnumerationConfig
    total_bundles: int
    per_theorem: dict
    findings: list
    elapsed_seconds: float

    @property
    def ok(self) -> bool:
        return all(st.inconsistent == 0 for st in self.per_theorem.values())


_WITNESS_CAP = 4
_SAMPLE_CAP = 3


def _witness_dicts(witnesses) -> list[dict]:
    out = []
    for w in witnesses[:_WITNESS_CAP]:
        out.append({"i": w.i, "k": list(w.k), "t": w.t, "dim": str(w.dim), "required": w.required})
    return out


def _check_bundle(space_text: str, bundle: Bundle, theorems: tuple[str, ...]):
    """Worker: returns, per check id, applicability, consistency and findings."""
    name = format_bundle(bundle)
    rows = []
    for tid in theorems:
        verdict = verify_theorem(bundle, TheoremId(tid))
        fnds = []
        if verdict.applicable:
            base = {"space": space_text, "bundle": name, "theorem": tid}
            if not verdict.consistent:
                fnds.append(
                    {
                        "type": "inconsistent",
                        **base,
                        "condition": verdict.condition_holds,
                        "form": verdict.form_holds,
                        "witnesses": _witness_dicts(list(verdict.witnesses)),
                    }
                )
            if verdict.detected and verdict.detector_agrees is False:
                fnds.append(
                    {
                        "type": "detector_mismatch",
                        **base,
                        "detected": [t.label for t in verdict.detected],
                    }
                )
            if tid in ("T0", "T4") and verdict.condition_holds and not verdict.detected:
                fnds.append({"type": "detector_empty", **base})
            if tid in ("T1", "T3") and verdict.condition_holds and not is_acm(bundle):
                fnds.append({"type": "t1_without_acm", **base})
        rows.append((tid, verdict.applicable, bool(verdict.consistent), fnds))
    return name, rows


def _run_chunk(args):
    space_text, bundles, theorems = args
    return [_check_bundle(space_text, b, theorems) for b in bundles]


def run_verification(cfg: EnumerationConfig) -> RunReport:
    start = time.monotonic()
    per_theorem = {tid: TheoremStats() for tid in cfg.theorems}
    findings: list = []
    total = 0

    def consume(result):
        nonlocal total
        for name, rows in result:
            total += 1
            for tid, applicable, consistent, fnds in rows:
                st = per_theorem[tid]
                if not applicable:
                    st.not_applicable += 1
                    continue
                st.applicable += 1
                if consistent:
                    st.consistent += 1
                else:
                    st.inconsistent += 1
                    if len(st.samples) < _SAMPLE_CAP:
                        st.samples.append(name)
                findings.extend(fnds)

    tasks = []
    for space_text in cfg.spaces:
        space = parse_space(space_text)
        bundles = list(enumerate_bundles(space, cfg))
        label = format_space(space)
        if cfg.jobs > 1:
            chunk = max(1, len(bundles) // (cfg.jobs * 8))
            for start_idx in range(0, len(bundles), chunk):
                tasks.append((label, bundles[start_idx : start_idx + chunk], cfg.theorems))
        else:
            tasks.append((label, bundles, cfg.theorems))

    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            for result in pool.map(_run_chunk, tasks):
                consume(result)
    else:
        for task in tasks:
            consume(_run_chunk(task))

    return RunReport(
        config=cfg,
        total_bundles=total,
        per_theorem=per_theorem,
        findings=findings,
        elapsed_seconds=time.monotonic() - start,
    )


def default_jobs(explicit: Optional[int] = None) -> int:
    if explicit is not None:
        return explicit
    env = os.environ.get("MPREG_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise ConfigError(f"MPREG_JOBS must be an integer, got {env!r}") from exc
    return 1


# ---------------------------------------------------------------------------
# regularity definition comparison


def compare_regularity_definitions(
    bundles: Iterable[Bundle], p_range: tuple[int, int] = (-2, 2)
) -> dict:
    """Empirical comparison of the two regularity definitions.

    Checks, over every bundle and base point in range:
    * strict definition at (p, q) implies box definition at (p, q);
    * box regularity at (p-m+1, p-n+1) implies strict regularity at (p, p),
      in both factor pairings.
    """
    lo, hi = p_range
    report = {
        "checked_bundles": 0,
        "hw_implies_box_violations": [],
        "shift_literal_violations": [],
        "shift_swapped_violations": [],
    }
    for bundle in bundles:
        space = bundle.space
        if space.num_factors != 2:
            raise ArityError("definition comparison requires two-factor spaces")
        n, m = space.dims
        report["checked_bundles"] += 1
        name = format_bundle(bundle)
        for p in range(lo, hi + 1):
            for q in range(lo, hi + 1):
                if is_regular_at(bundle, (p, q), "hw") and not is_regular_at(
                    bundle, (p, q), "paper"
                ):
                    report["hw_implies_box_violations"].append(
                        {"bundle": name, "space": format_space(space), "p": (p, q)}
                    )
        for p in range(lo, hi + 1):
            if is_regular_at(bundle, (p - m + 1, p - n + 1), "paper") and not is_regular_at(
                bundle, (p, p), "hw"
            ):
                report["shift_literal_violations"].append(
                    {"bundle": name, "space": format_space(space), "p": p}
                )
            if is_regular_at(bundle, (p - n + 1, p - m + 1), "paper") and not is_regular_at(
                bundle, (p, p), "hw"
            ):
                report["shift_swapped_violations"].append(
                    {"bundle": name, "space": format_space(space), "p": p}
                )
    return report
