"""Multigraded regularity for decomposable bundles.

Two definition families are implemented and kept strictly separate:

* "paper": vanishing of H^i at twists p + k where k runs over the box
  -n_j <= k_j <= 0 with k_1 + ... + k_s = -i, for every i >= 1.
* "hw": the two-factor variant asking vanishing at p + (j, k) with
  j + k = -i - 1 and j, k <= -1, for every i >= 1.

Reg is the least balanced p at which the bundle is regular.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

from .bundles import ArityError, Bundle, Cotangent, Line, ModelError, Space
from .cohomology import h_bundle

DEFINITIONS = ("paper", "hw")

_SCAN_GUARD = 10000


def _as_vector(space: Space, p: Union[int, tuple]) -> tuple[int, ...]:
    if isinstance(p, int):
        return (p,) * space.num_factors
    p = tuple(p)
    if len(p) != space.num_factors:
        raise ArityError(f"twist vector length {len(p)} does not match the space")
    return p


def paper_offsets(space: Space, i: int) -> Iterator[tuple[int, ...]]:
    """Box vectors k with sum -i and -n_j <= k_j <= 0."""

    def rec(j: int, remaining: int):
        if j == space.num_factors:
            if remaining == 0:
                yield ()
            return
        tail_capacity = sum(space.dims[j + 1 :])
        n = space.dims[j]
        # k_j must leave a sum the remaining factors can still absorb
        for kj in range(max(-n, remaining), 1):
            rest = remaining - kj
            if -tail_capacity <= rest <= 0:
                for tail in rec(j + 1, rest):
                    yield (kj,) + tail

    yield from rec(0, -i)


def hw_offsets(space: Space, i: int) -> Iterator[tuple[int, int]]:
    if space.num_factors != 2:
        raise ArityError("the 'hw' definition is only defined on two-factor spaces")
    for j in range(-i, 0):
        yield (j, -i - 1 - j)


def regularity_failures(
    bundle: Bundle, p: Union[int, tuple], definition: str = "paper"
) -> list[tuple[int, tuple[int, ...], int]]:
    """All (i, k, dim) with the required group nonzero at base twist p."""
    if definition not in DEFINITIONS:
        raise ValueError(f"unknown regularity definition {definition!r}")
    space = bundle.space
    pv = _as_vector(space, p)
    d = space.total_dim
    offsets = paper_offsets if definition == "paper" else hw_offsets
    fails = []
    for i in range(1, d + 1):
        for k in offsets(space, i):
            tv = tuple(a + b for a, b in zip(pv, k))
            dim = h_bundle(bundle, tv, i)
            if dim:
                fails.append((i, tuple(k), dim))
    return fails


def is_regular_at(bundle: Bundle, p: Union[int, tuple], definition: str = "paper") -> bool:
    if definition not in DEFINITIONS:
        raise ValueError(f"unknown regularity definition {definition!r}")
    space = bundle.space
    pv = _as_vector(space, p)
    d = space.total_dim
    offsets = paper_offsets if definition == "paper" else hw_offsets
    for i in range(1, d + 1):
        for k in offsets(space, i):
            tv = tuple(a + b for a, b in zip(pv, k))
            if h_bundle(bundle, tv, i):
                return False
    return True


def is_hw_regular_at(bundle: Bundle, p: Union[int, tuple]) -> bool:
    return is_regular_at(bundle, p, "hw")


@dataclass(frozen=True)
class RegularityReport:
    definition: str
    value: int
    monotone_checked: bool
    failures: tuple  # witnesses (i, k, dim) one step below the value


def _scan_floor(bundle: Bundle) -> int:
    d = bundle.space.total_dim
    floor = 0
    for s in bundle.summands:
        for atom in s.atoms:
            base = atom.degree if isinstance(atom, Line) else atom.twist
            floor = min(floor, -base - d)
    return floor


def reg(bundle: Bundle, definition: str = "paper") -> RegularityReport:
    """Least balanced twist at which the bundle is regular.

    The scan starts from a safe heuristic floor and walks in both
    directions, so the reported value does not depend on the heuristic.
    """
    floor = _scan_floor(bundle)
    p = floor
    if is_regular_at(bundle, p, definition):
        while is_regular_at(bundle, p - 1, definition):
            p -= 1
            if p < floor - _SCAN_GUARD:
                raise ModelError("regularity walk-down failed to terminate")
    else:
        while not is_regular_at(bundle, p, definition):
            p += 1
            if p > floor + _SCAN_GUARD:
                raise ModelError("regularity walk-up failed to terminate")
    monotone = is_regular_at(bundle, p + 1, definition)
    failures = tuple(regularity_failures(bundle, p - 1, definition))
    return RegularityReport(definition, p, monotone, failures)
