"""Exact sheaf cohomology for box summands via per-factor formulas and Kunneth.

Two independent routes are provided for a single projective factor: closed
formulas (h_line, h_bott) and a long-exact-sequence chase through the Euler
sequence (oracle_euler_sequence).  The test suite plays them against each
other; the engine itself only uses the closed formulas.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial
from typing import Iterable, Optional

from .bundles import (
    Atom,
    BoxSummand,
    Bundle,
    Cotangent,
    Line,
    ModelError,
    Space,
    normalize_atom,
    twist_atom,
)


def extended_binomial(x: int, k: int) -> int:
    """Binomial coefficient with integer (possibly negative) upper argument."""
    if k < 0:
        return 0
    num = 1
    for i in range(k):
        num *= x - i
    value, rem = divmod(num, factorial(k))
    assert rem == 0
    return value


def h_line(n: int, d: int, i: int) -> int:
    """dim H^i of O(d) on a single projective space of dimension n."""
    if i == 0 and d >= 0:
        return comb(d + n, n)
    if i == n and d <= -n - 1:
        return comb(-d - 1, n)
    return 0


def h_bott(n: int, p: int, t: int, i: int) -> int:
    """dim H^i of W^p(t) on a dimension-n factor, for 1 <= p <= n-1.

    At most one cohomological degree is nonzero for each (p, t).
    """
    if not 1 <= p <= n - 1:
        raise ModelError(f"h_bott expects 1 <= p <= n-1, got p={p}, n={n}")
    if i == 0 and t > p:
        return comb(t + n - p, t) * comb(t - 1, p)
    if i == p and t == 0:
        return 1
    if i == n and t < p - n:
        return comb(-t + p, -t) * comb(-t - 1, n - p)
    return 0


def koszul_section_rank(n: int, q: int, t: int) -> int:
    """Rank of the degree-t global-section Koszul differential out of spot q.

    Valid for t >= 1, where the section-level Koszul complex is exact at
    every interior spot, so the rank telescopes to an alternating sum.
    """
    total = 0
    sign = 1
    for j in range(q, n + 2):
        if t - j >= 0:
            total += sign * comb(n + 1, j) * comb(t - j + n, n)
        sign = -sign
    return total


@lru_cache(maxsize=None)
def oracle_euler_sequence(n: int, p: int, t: int, i: int) -> int:
    """dim H^i of W^p(t) computed by chasing the twisted Euler sequence.

    Uses 0 -> W^p(t) -> O(t-p)^C(n+1,p) -> W^(p-1)(t) -> 0 and recursion on
    p, with line cohomology as the only closed-form input.  Independent of
    h_bott.
    """
    if i < 0 or i > n:
        return 0
    atom = normalize_atom(n, Cotangent(p, t))
    if isinstance(atom, Line):
        return h_line(n, atom.degree, i)
    p = atom.p

    def c_vec(j: int) -> int:
        return oracle_euler_sequence(n, p - 1, t, j)

    def b_vec(j: int) -> int:
        return comb(n + 1, p) * h_line(n, t - p, j)

    b_support = [j for j in range(n + 1) if b_vec(j)]
    c_support = [j for j in range(n + 1) if c_vec(j)]
    if not b_support:
        # H^i(A) = H^(i-1)(C)
        return c_vec(i - 1)
    if not c_support:
        return b_vec(i)
    beta = b_support[0]
    gamma = c_support[0]
    if beta == 0 and gamma == 0:
        # middle rank resolves the two unknowns of the four-term sequence
        s0 = koszul_section_rank(n, p, t)
        if i == 0:
            return b_vec(0) - s0
        if i == 1:
            return c_vec(0) - s0
        return 0
    if beta == n and gamma == n:
        return b_vec(n) - c_vec(n) if i == n else 0
    if beta == gamma + 1:
        return b_vec(beta) + c_vec(gamma) if i == beta else 0
    # disjoint supports
    if i == beta:
        return b_vec(beta)
    if i == gamma + 1:
        return c_vec(gamma)
    return 0


@lru_cache(maxsize=None)
def atom_h_vector(n: int, atom: Atom) -> tuple[int, ...]:
    atom = normalize_atom(n, atom)
    if isinstance(atom, Line):
        return tuple(h_line(n, atom.degree, i) for i in range(n + 1))
    return tuple(h_bott(n, atom.p, atom.twist, i) for i in range(n + 1))


def _convolve(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return tuple(out)


@lru_cache(maxsize=None)
def summand_h_vector(space: Space, summand: BoxSummand) -> tuple[int, ...]:
    """Full cohomology vector (h^0, ..., h^d) of one box summand."""
    vec = (1,)
    for n, atom in zip(space.dims, summand.atoms):
        vec = _convolve(vec, atom_h_vector(n, atom))
    return vec


def h_box(space: Space, summand: BoxSummand, i: int) -> int:
    if i < 0 or i > space.total_dim:
        return 0
    return summand_h_vector(space, summand)[i]


def _twisted_summands(bundle: Bundle, tvec: tuple[int, ...]):
    for s in bundle.summands:
        yield BoxSummand(tuple(twist_atom(a, t) for a, t in zip(s.atoms, tvec)))


def h_bundle(bundle: Bundle, tvec: Iterable[int], i: int) -> int:
    """dim H^i of the bundle twisted by O(tvec)."""
    tvec = tuple(tvec)
    if len(tvec) != bundle.space.num_factors:
        raise ModelError(f"twist vector length {len(tvec)} does not match the space")
    return sum(h_box(bundle.space, s, i) for s in _twisted_summands(bundle, tvec))


def h_vector(bundle: Bundle, tvec: Iterable[int]) -> tuple[int, ...]:
    tvec = tuple(tvec)
    d = bundle.space.total_dim
    out = [0] * (d + 1)
    for s in _twisted_summands(bundle, tvec):
        for i, x in enumerate(summand_h_vector(bundle.space, s)):
            out[i] += x
    return tuple(out)


# ---------------------------------------------------------------------------
# Euler characteristic, by an independent recursion


def _chi_line(n: int, d: int) -> int:
    return extended_binomial(d + n, n)


@lru_cache(maxsize=None)
def _chi_cot(n: int, p: int, t: int) -> int:
    if p < 0:
        return 0
    if p == 0:
        return _chi_line(n, t)
    # additivity over the twisted Euler sequence
    return comb(n + 1, p) * _chi_line(n, t - p) - _chi_cot(n, p - 1, t)


def euler_characteristic_atom(n: int, atom: Atom) -> int:
    if isinstance(atom, Line):
        return _chi_line(n, atom.degree)
    return _chi_cot(n, atom.p, atom.twist)


def euler_characteristic(bundle: Bundle, tvec: Iterable[int] = None) -> int:
    space = bundle.space
    tvec = tuple(tvec) if tvec is not None else (0,) * space.num_factors
    total = 0
    for s in _twisted_summands(bundle, tvec):
        prod = 1
        for n, atom in zip(space.dims, s.atoms):
            prod *= euler_characteristic_atom(n, atom)
        total += prod
    return total


# ---------------------------------------------------------------------------
# nonvanishing windows in a balanced twist parameter


Endpoint = Optional[int]  # None encodes an unbounded endpoint


@dataclass(frozen=True)
class IntervalSet:
    """Union of disjoint integer intervals, endpoints possibly infinite."""

    intervals: tuple[tuple[Endpoint, Endpoint], ...]

    @staticmethod
    def empty() -> "IntervalSet":
        return IntervalSet(())

    @staticmethod
    def of(lo: Endpoint, hi: Endpoint) -> "IntervalSet":
        if lo is not None and hi is not None and lo > hi:
            return IntervalSet.empty()
        return IntervalSet(((lo, hi),))

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    @property
    def is_finite(self) -> bool:
        return all(lo is not None and hi is not None for lo, hi in self.intervals)

    def min_point(self) -> int:
        if self.is_empty:
            raise ModelError("empty interval set has no minimum")
        lo = self.intervals[0][0]
        if lo is None:
            raise ModelError("interval set is unbounded below")
        return lo

    def contains(self, t: int) -> bool:
        for lo, hi in self.intervals:
            if (lo is None or t >= lo) and (hi is None or t <= hi):
                return True
        return False

    def points(self) -> list[int]:
        if not self.is_finite:
            raise ModelError("cannot list the points of an unbounded interval set")
        out = []
        for lo, hi in self.intervals:
            out.extend(range(lo, hi + 1))
        return out

    def union(self, other: "IntervalSet") -> "IntervalSet":
        def lo_key(iv):
            return (0, 0) if iv[0] is None else (1, iv[0])

        merged: list[tuple[Endpoint, Endpoint]] = []
        for lo, hi in sorted(self.intervals + other.intervals, key=lo_key):
            if merged:
                plo, phi = merged[-1]
                # overlapping or adjacent integer intervals merge
                if phi is None or lo is None or lo <= phi + 1:
                    new_hi = None if (phi is None or hi is None) else max(phi, hi)
                    merged[-1] = (plo, new_hi)
                    continue
            merged.append((lo, hi))
        return IntervalSet(tuple(merged))

    def intersect(self, other: "IntervalSet") -> "IntervalSet":
        out = IntervalSet.empty()
        for alo, ahi in self.intervals:
            for blo, bhi in other.intervals:
                lo = alo if blo is None else (blo if alo is None else max(alo, blo))
                hi = ahi if bhi is None else (bhi if ahi is None else min(ahi, bhi))
                if lo is not None and hi is not None and lo > hi:
                    continue
                out = out.union(IntervalSet.of(lo, hi))
        return out


def _atom_level_window(n: int, atom: Atom, offset: int, level: int) -> IntervalSet:
    """Window of t with h^level(atom twisted by t + offset) nonzero."""
    atom = normalize_atom(n, atom)
    if isinstance(atom, Line):
        a = atom.degree + offset
        if level == 0:
            return IntervalSet.of(-a, None)
        if level == n:
            return IntervalSet.of(None, -a - n - 1)
        return IntervalSet.empty()
    c = atom.twist + offset
    if level == 0:
        return IntervalSet.of(atom.p + 1 - c, None)
    if level == atom.p:
        return IntervalSet.of(-c, -c)
    if level == n:
        return IntervalSet.of(None, atom.p - n - 1 - c)
    return IntervalSet.empty()


def summand_t_window(
    space: Space, summand: BoxSummand, k: tuple[int, ...], i: int
) -> IntervalSet:
    """Set of t with h^i(summand twisted by (t+k_1, ..., t+k_s)) nonzero."""
    out = IntervalSet.empty()

    def rec(factor: int, remaining: int, acc: IntervalSet):
        nonlocal out
        if acc.is_empty:
            return
        if factor == space.num_factors:
            if remaining == 0:
                out = out.union(acc)
            return
        n = space.dims[factor]
        atom = summand.atoms[factor]
        levels = [0, n] if isinstance(normalize_atom(n, atom), Line) else [
            0,
            normalize_atom(n, atom).p,
            n,
        ]
        for lev in levels:
            if lev > remaining:
                continue
            w = _atom_level_window(n, atom, k[factor], lev)
            if w.is_empty:
                continue
            rec(factor + 1, remaining - lev, acc.intersect(w))

    rec(0, i, IntervalSet.of(None, None))
    return out


def nonvanishing_t_window(
    bundle: Bundle, k: Iterable[int], i: int, balanced: bool = True
) -> IntervalSet:
    """Exact set of integers t with h^i(bundle twisted by (t,...,t)+k) nonzero.

    Finite for 0 < i < dim X; for i = 0 or i = dim X the set may contain rays.
    """
    if not balanced:
        raise ValueError("only balanced windows are supported")
    k = tuple(k)
    space = bundle.space
    if len(k) != space.num_factors:
        raise ModelError(f"offset vector length {len(k)} does not match the space")
    if i < 0 or i > space.total_dim:
        return IntervalSet.empty()
    out = IntervalSet.empty()
    for s in bundle.summands:
        out = out.union(summand_t_window(space, s, k, i))
    return out


# ---------------------------------------------------------------------------
# tables


@dataclass(frozen=True)
class CohomologyTable:
    bundle: Bundle
    twist_box: tuple[tuple[int, int], ...]
    entries: dict  # (i, tvec) -> positive dimension

    def dimension(self, i: int, tvec: tuple[int, ...]) -> int:
        return self.entries.get((i, tuple(tvec)), 0)


def _iter_box(box: tuple[tuple[int, int], ...]):
    if not box:
        yield ()
        return
    (lo, hi), rest = box[0], box[1:]
    for v in range(lo, hi + 1):
        for tail in _iter_box(rest):
            yield (v,) + tail


def build_table(bundle: Bundle, twist_box: Iterable[tuple[int, int]]) -> CohomologyTable:
    """Tabulate all nonzero h^i over a rectangular box of twists."""
    twist_box = tuple((int(lo), int(hi)) for lo, hi in twist_box)
    if len(twist_box) != bundle.space.num_factors:
        raise ModelError("twist box arity does not match the space")
    for lo, hi in twist_box:
        if lo > hi:
            raise ModelError(f"empty twist range {lo}..{hi}")
    entries = {}
    for tvec in _iter_box(twist_box):
        for i, x in enumerate(h_vector(bundle, tvec)):
            if x:
                entries[(i, tvec)] = x
    return CohomologyTable(bundle, twist_box, entries)
