"""Splitting criteria: vanishing condition checkers, structural form
classifiers, and the extremal-summand detector.

Each check id pairs a cohomological condition with a structural description
of the bundles expected to satisfy it; verify_theorem evaluates both sides
and reports whether they agree, together with explicit witnesses for any
nonvanishing group.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional

from .bundles import (
    ArityError,
    BoxSummand,
    Bundle,
    Cotangent,
    Line,
    ModelError,
    Space,
    format_summand,
    line_summand,
    make_bundle,
    make_summand,
    rank,
)
from .cohomology import h_bundle, nonvanishing_t_window
from .regularity import paper_offsets, reg


class TheoremId(str, Enum):
    T1 = "T1"
    T2 = "T2"
    C1 = "C1"
    C2 = "C2"
    T0 = "T0"
    P4 = "P4"
    T3 = "T3"
    T2B = "T2B"
    T4 = "T4"
    P4B = "P4B"


class PreconditionError(ModelError):
    pass


@dataclass(frozen=True)
class Witness:
    """One nonvanishing group H^i(E(t,...,t) tensor O(k)) with its dimension."""

    i: int
    k: tuple[int, ...]
    t: int
    dim: int
    required: bool = True


def _witness_at(bundle: Bundle, i: int, k: tuple[int, ...], t: int, required=True) -> Witness:
    tv = tuple(t + kj for kj in k)
    return Witness(i, k, t, h_bundle(bundle, tv, i), required)


def _window_witness(bundle: Bundle, i: int, k: tuple[int, ...]) -> Optional[Witness]:
    w = nonvanishing_t_window(bundle, k, i)
    if w.is_empty:
        return None
    return _witness_at(bundle, i, k, w.min_point())


# ---------------------------------------------------------------------------
# ACM


def is_acm(bundle: Bundle) -> bool:
    """True when every intermediate cohomology group vanishes for all
    balanced twists."""
    d = bundle.space.total_dim
    zero = (0,) * bundle.space.num_factors
    return all(nonvanishing_t_window(bundle, zero, i).is_empty for i in range(1, d))


def acm_witnesses(bundle: Bundle) -> list[Witness]:
    d = bundle.space.total_dim
    zero = (0,) * bundle.space.num_factors
    out = []
    for i in range(1, d):
        w = _window_witness(bundle, i, zero)
        if w is not None:
            out.append(w)
    return out


def acm_closed_form_line(space: Space, degrees: Iterable[int]) -> bool:
    """Closed-form ACM test for a line bundle O(a_1, ..., a_s).

    Derived from the brute-force window computation: the bundle fails to be
    ACM exactly when some nonempty proper subset S of the factors satisfies
    a_k - a_j > n_j for every j in S and k outside S.
    """
    a = tuple(degrees)
    if len(a) != space.num_factors:
        raise ArityError("degree vector length does not match the space")
    idx = range(space.num_factors)
    for size in range(1, space.num_factors):
        for S in itertools.combinations(idx, size):
            inside = set(S)
            if all(
                a[k] - a[j] > space.dims[j]
                for j in S
                for k in idx
                if k not in inside
            ):
                return False
    return True


def acm_printed_variant_line(space: Space, degrees: Iterable[int], variant: str) -> bool:
    """Published closed-form variants, kept verbatim for comparison runs."""
    a = tuple(degrees)
    if len(a) != space.num_factors:
        raise ArityError("degree vector length does not match the space")
    if variant == "b2":
        if space.num_factors != 2:
            raise ArityError("variant 'b2' is a two-factor statement")
        n, m = space.dims
        return (a[0] - a[1] >= -m) and (a[1] - a[0] >= -n)
    if variant == "b3":
        idx = range(space.num_factors)
        for j in idx:
            if not any(a[j] - a[h] <= space.dims[h] for h in idx if h != j):
                return False
            if not any(a[j] - a[k] >= -space.dims[j] for k in idx if k != j):
                return False
        return True
    raise ValueError(f"unknown variant {variant!r}")


def acm_discrepancy(space: Space, degree_range: tuple[int, int], variant: str) -> list[dict]:
    """Degree vectors where the variant formula disagrees with the engine."""
    lo, hi = degree_range
    out = []
    for a in itertools.product(range(lo, hi + 1), repeat=space.num_factors):
        truth = is_acm(make_bundle(space, [line_summand(space, a)]))
        claimed = acm_printed_variant_line(space, a, variant)
        if truth != claimed:
            out.append({"degrees": a, "acm": truth, "variant": claimed})
    return out


# ---------------------------------------------------------------------------
# offset families for the condition checkers


def _box_offsets_at_least(space: Space, floor: int) -> Iterable[tuple[int, ...]]:
    """Box vectors -n_j <= k_j <= 0 with sum >= floor."""
    ranges = [range(-n, 1) for n in space.dims]
    for k in itertools.product(*ranges):
        if sum(k) >= floor:
            yield k


def _interior_offsets_at_least(space: Space, floor: int) -> Iterable[tuple[int, ...]]:
    """Strict-interior vectors -n_j < k_j <= 0 with sum >= floor."""
    ranges = [range(-n + 1, 1) for n in space.dims]
    for k in itertools.product(*ranges):
        if sum(k) >= floor:
            yield k


def _is_corner_vector(space: Space, k: tuple[int, ...]) -> bool:
    return all(kj in (0, -n) for kj, n in zip(k, space.dims))


# ---------------------------------------------------------------------------
# conditions


def condition_t1(bundle: Bundle) -> tuple[bool, list[Witness]]:
    """Vanishing of H^i at every balanced twist and every box offset with
    offset sum exactly -i, for 0 < i < dim X."""
    space = bundle.space
    d = space.total_dim
    witnesses = []
    for i in range(1, d):
        for k in paper_offsets(space, i):
            w = _window_witness(bundle, i, k)
            if w is not None:
                witnesses.append(w)
    return (not witnesses, witnesses)


def condition_t2(bundle: Bundle) -> tuple[bool, list[Witness]]:
    """As condition_t1 but with offset sums in [-i, 0], excluding the corner
    offsets whose coordinates all lie in {0, -n_j}; the zero offset stays in."""
    space = bundle.space
    d = space.total_dim
    witnesses = []
    for i in range(1, d):
        for k in _box_offsets_at_least(space, -i):
            if _is_corner_vector(space, k) and any(k):
                continue
            w = _window_witness(bundle, i, k)
            if w is not None:
                witnesses.append(w)
    return (not witnesses, witnesses)


def c1_boundary_witnesses(bundle: Bundle) -> list[Witness]:
    """Boundary-family scan: offsets with sum -i touching k_1 = -n or
    k_2 = -m, for every 0 < i < dim X.  Witnesses at i = n or i = m carry
    required=False; they are informational only."""
    space = bundle.space
    if space.num_factors != 2:
        raise ArityError("the boundary family is a two-factor construction")
    n, m = space.dims
    d = n + m
    out = []
    for i in range(1, d):
        for k in _box_offsets_at_least(space, -i):
            if sum(k) != -i:
                continue
            if k[0] != -n and k[1] != -m:
                continue
            w = _window_witness(bundle, i, k)
            if w is not None:
                required = i != n and i != m
                out.append(Witness(w.i, w.k, w.t, w.dim, required))
    return out


def condition_c1(bundle: Bundle) -> tuple[bool, list[Witness]]:
    """Interior vanishing up to the rank, plus the boundary family with the
    degrees i = n and i = m exempted."""
    space = bundle.space
    if space.num_factors != 2:
        raise ArityError("this condition is a two-factor statement")
    r = rank(bundle)
    witnesses = []
    for i in range(1, r):
        for k in _interior_offsets_at_least(space, -i):
            w = _window_witness(bundle, i, k)
            if w is not None:
                witnesses.append(w)
    boundary = c1_boundary_witnesses(bundle)
    witnesses.extend(boundary)
    ok = not any(w.required for w in witnesses)
    return (ok, witnesses)


def condition_c2(bundle: Bundle) -> tuple[bool, list[Witness]]:
    """Interior vanishing for i below the rank with nonpositive offsets of
    sum at least -i."""
    space = bundle.space
    if space.num_factors != 2:
        raise ArityError("this condition is a two-factor statement")
    r = rank(bundle)
    witnesses = []
    for i in range(1, r):
        for k in itertools.product(range(-i, 1), repeat=2):
            if sum(k) < -i:
                continue
            w = _window_witness(bundle, i, k)
            if w is not None:
                witnesses.append(w)
    return (not witnesses, witnesses)


def _require_reg_zero(bundle: Bundle) -> None:
    value = reg(bundle).value
    if value != 0:
        raise PreconditionError(f"needs Reg = 0, got {value}")


def condition_t0(bundle: Bundle) -> tuple[bool, list[Witness]]:
    """Fixed-twist variant: vanishing of H^i(E(-1,-1) tensor O(k)) for
    strict-interior offsets with sum >= -i and i below min(rank, dim)."""
    space = bundle.space
    if space.num_factors != 2:
        raise ArityError("this condition is a two-factor statement")
    _require_reg_zero(bundle)
    top = min(rank(bundle), space.total_dim)
    witnesses = []
    for i in range(1, top):
        for k in _interior_offsets_at_least(space, -i):
            w = _witness_at(bundle, i, k, -1)
            if w.dim:
                witnesses.append(w)
    return (not witnesses, witnesses)


def condition_t4(bundle: Bundle) -> tuple[bool, list[Witness]]:
    """All-twist variant of condition_t0 on any number of factors."""
    space = bundle.space
    _require_reg_zero(bundle)
    top = min(rank(bundle), space.total_dim)
    witnesses = []
    for i in range(1, top):
        for k in _interior_offsets_at_least(space, -i):
            w = _window_witness(bundle, i, k)
            if w is not None:
                witnesses.append(w)
    return (not witnesses, witnesses)


def condition_p4(bundle: Bundle) -> tuple[bool, list[Witness]]:
    """Three first-cohomology vanishings at the natural twist."""
    space = bundle.space
    if space.num_factors != 2:
        raise ArityError("this condition is a two-factor statement")
    if any(n <= 2 for n in space.dims):
        raise PreconditionError("needs every factor of dimension > 2")
    if rank(bundle) != 2:
        raise PreconditionError("needs a rank 2 bundle")
    _require_reg_zero(bundle)
    witnesses = []
    for k in ((0, 0), (-1, 0), (0, -1)):
        w = _witness_at(bundle, 1, k, 0)
        if w.dim:
            witnesses.append(w)
    return (not witnesses, witnesses)


def condition_p4b(bundle: Bundle) -> tuple[bool, list[Witness]]:
    """First-cohomology vanishing at the natural twist and one step down in
    each factor."""
    space = bundle.space
    if any(n <= 2 for n in space.dims):
        raise PreconditionError("needs every factor of dimension > 2")
    if rank(bundle) != 2:
        raise PreconditionError("needs a rank 2 bundle")
    _require_reg_zero(bundle)
    s = space.num_factors
    offsets = [(0,) * s]
    for j in range(s):
        e = [0] * s
        e[j] = -1
        offsets.append(tuple(e))
    witnesses = []
    for k in offsets:
        w = _witness_at(bundle, 1, k, 0)
        if w.dim:
            witnesses.append(w)
    return (not witnesses, witnesses)


_CONDITIONS = {
    TheoremId.T1: condition_t1,
    TheoremId.T3: condition_t1,
    TheoremId.T2: condition_t2,
    TheoremId.T2B: condition_t2,
    TheoremId.C1: condition_c1,
    TheoremId.C2: condition_c2,
    TheoremId.T0: condition_t0,
    TheoremId.T4: condition_t4,
    TheoremId.P4: condition_p4,
    TheoremId.P4B: condition_p4b,
}


def condition_for(bundle: Bundle, theorem: TheoremId) -> tuple[bool, list[Witness]]:
    return _CONDITIONS[TheoremId(theorem)](bundle)


# ---------------------------------------------------------------------------
# structural forms


def _summand_degrees(s: BoxSummand) -> Optional[tuple[int, ...]]:
    if all(isinstance(a, Line) for a in s.atoms):
        return tuple(a.degree for a in s.atoms)
    return None


def _is_balanced_line(s: BoxSummand) -> bool:
    degs = _summand_degrees(s)
    return degs is not None and len(set(degs)) == 1


def _is_step_line(s: BoxSummand) -> bool:
    degs = _summand_degrees(s)
    return degs is not None and max(degs) - min(degs) <= 1


def is_extremal_summand(space: Space, s: BoxSummand) -> bool:
    """Membership in the extremal menu: every atom O, O(1) or W^a(a+1),
    with O occurring on at least one factor."""
    has_zero = False
    for n, atom in zip(space.dims, s.atoms):
        if isinstance(atom, Line):
            if atom.degree == 0:
                has_zero = True
            elif atom.degree != 1:
                return False
        else:
            if atom.twist != atom.p + 1:
                return False
    return has_zero


def extremal_menu(space: Space) -> list[BoxSummand]:
    """All box summands realizable from a top-touching corner vector."""
    out = []
    for h in itertools.product(*[range(0, n + 1) for n in space.dims]):
        if not any(hj == n for hj, n in zip(h, space.dims)):
            continue
        out.append(_corner_summand(space, h))
    return out


def _corner_summand(space: Space, h: tuple[int, ...]) -> BoxSummand:
    atoms = []
    for hj, n in zip(h, space.dims):
        if hj == n:
            atoms.append(Line(0))
        elif hj == 0:
            atoms.append(Line(1))
        else:
            atoms.append(Cotangent(hj, hj + 1))
    return make_summand(space, atoms)


def classify_form(bundle: Bundle, theorem: TheoremId) -> bool:
    """Does the canonical form match the structure the check id predicts?"""
    theorem = TheoremId(theorem)
    space = bundle.space
    if theorem in (TheoremId.T1, TheoremId.T3):
        return all(_is_balanced_line(s) for s in bundle.summands)
    if theorem in (TheoremId.T2, TheoremId.T2B, TheoremId.C1, TheoremId.C2):
        return all(_is_step_line(s) for s in bundle.summands)
    if theorem in (TheoremId.T0, TheoremId.T4):
        return any(is_extremal_summand(space, s) for s in bundle.summands)
    if theorem in (TheoremId.P4, TheoremId.P4B):
        if len(bundle.summands) != 2:
            return False
        degs = [_summand_degrees(s) for s in bundle.summands]
        if any(d is None for d in degs):
            return False
        s = space.num_factors
        menu = {(0,) * s}
        if theorem == TheoremId.P4:
            menu |= {(0, 1), (1, 0)}
        else:
            menu |= {
                l
                for l in itertools.product((0, 1), repeat=s)
                if l != (1,) * s
            }
        for first, second in (degs, degs[::-1]):
            if tuple(first) in menu and all(x >= 0 for x in second):
                return True
        return False
    raise ValueError(f"unknown check id {theorem!r}")


# ---------------------------------------------------------------------------
# extremal detector


@dataclass(frozen=True)
class SummandTag:
    label: str
    corner: tuple[int, ...]
    summand: BoxSummand


def _tag_label(space: Space, h: tuple[int, ...], summand: BoxSummand) -> str:
    if h == space.dims:
        return "Triv"
    if space.num_factors == 2:
        n, m = space.dims
        if h == (n, 0):
            return "E01"
        if h == (0, m):
            return "E10"
        if h[0] == n:
            return f"CotSecond({h[1]})"
        if h[1] == m:
            return f"CotFirst({h[0]})"
    return f"GeneralBox[{format_summand(space, summand)}]"


def detect_extremal_summand(bundle: Bundle) -> list[SummandTag]:
    """Probe the corner groups of E(-1,...,-1) and name the summand each
    nonzero probe forces.  Requires Reg = 0."""
    report = reg(bundle)
    if report.value != 0:
        raise PreconditionError(f"detector needs Reg = 0, got {report.value}")
    space = bundle.space
    tags = []
    for h in itertools.product(*[range(0, n + 1) for n in space.dims]):
        if not any(hj == n for hj, n in zip(h, space.dims)):
            continue
        tv = tuple(-1 - hj for hj in h)
        if h_bundle(bundle, tv, sum(h)):
            s = _corner_summand(space, h)
            tags.append(SummandTag(_tag_label(space, h, s), h, s))
    return tags


# ---------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True)
class TheoremVerdict:
    theorem: TheoremId
    applicable: bool
    reason: Optional[str] = None
    condition_holds: Optional[bool] = None
    form_holds: Optional[bool] = None
    consistent: Optional[bool] = None
    witnesses: tuple = ()
    detected: tuple = ()
    detector_agrees: Optional[bool] = None


def applicability(bundle: Bundle, theorem: TheoremId) -> Optional[str]:
    """None when the check applies; otherwise a human-readable reason."""
    theorem = TheoremId(theorem)
    space = bundle.space
    s = space.num_factors
    two_factor = {
        TheoremId.T1,
        TheoremId.T2,
        TheoremId.C1,
        TheoremId.C2,
        TheoremId.T0,
        TheoremId.P4,
    }
    if theorem in two_factor and s != 2:
        return f"{theorem.value} is a two-factor check, space has {s} factors"
    if theorem == TheoremId.C1:
        r = rank(bundle)
        if r >= space.total_dim:
            return f"rank {r} is not below dim X = {space.total_dim}"
    if theorem == TheoremId.C2:
        r = rank(bundle)
        if r >= min(space.dims):
            return f"rank {r} is not below min factor dimension {min(space.dims)}"
    if theorem in (TheoremId.P4, TheoremId.P4B):
        if any(n <= 2 for n in space.dims):
            return "every factor must have dimension greater than 2"
        r = rank(bundle)
        if r != 2:
            return f"rank must be 2, got {r}"
    if theorem in (TheoremId.T0, TheoremId.T4, TheoremId.P4, TheoremId.P4B):
        value = reg(bundle).value
        if value != 0:
            return f"Reg must be 0, got {value}"
    return None


def verify_theorem(bundle: Bundle, theorem: TheoremId) -> TheoremVerdict:
    theorem = TheoremId(theorem)
    reason = applicability(bundle, theorem)
    if reason is not None:
        return TheoremVerdict(theorem, applicable=False, reason=reason)
    cond, witnesses = condition_for(bundle, theorem)
    form = classify_form(bundle, theorem)
    detected: tuple = ()
    agrees = None
    if theorem in (TheoremId.T0, TheoremId.T4):
        tags = detect_extremal_summand(bundle)
        detected = tuple(tags)
        if tags:
            present = set(bundle.summands)
            agrees = all(tag.summand in present for tag in tags)
    return TheoremVerdict(
        theorem,
        applicable=True,
        condition_holds=cond,
        form_holds=form,
        consistent=(cond == form),
        witnesses=tuple(witnesses),
        detected=detected,
        detector_agrees=agrees,
    )
