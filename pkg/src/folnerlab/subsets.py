"""Membership-predicate subsets of a group: shift and Boolean algebra,
window materialization, and density measurement along Folner truncations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import BackendMismatchError, DomainError
from .folner import FolnerSequence
from .groups import CountableGroup

__all__ = [
    "SubsetSpec",
    "DensityReport",
    "from_finite",
    "full_set",
    "empty_set",
    "multiples",
    "shift_left",
    "shift_right",
    "union",
    "intersection",
    "complement",
    "difference",
    "symmetric_difference",
    "materialize",
    "density_along",
    "rle_encode",
    "rle_decode",
]


@dataclass(frozen=True)
class SubsetSpec:
    """A named, pure membership predicate over one group backend."""

    name: str
    group: CountableGroup
    member: Callable[[object], bool] = field(repr=False)
    provenance: str = ""

    def __contains__(self, x) -> bool:
        return bool(self.member(x))


def _same_backend(e: SubsetSpec, f: SubsetSpec):
    if e.group is not f.group:
        raise BackendMismatchError(
            f"sets {e.name!r} and {f.name!r} live on different backends"
        )


def from_finite(group: CountableGroup, elements: Iterable, name: str = None) -> SubsetSpec:
    elems = frozenset(elements)
    return SubsetSpec(
        name=name or f"finite[{len(elems)}]",
        group=group,
        member=elems.__contains__,
        provenance="explicit finite set",
    )


def full_set(group: CountableGroup) -> SubsetSpec:
    return SubsetSpec(name="G", group=group, member=lambda x: True)


def empty_set(group: CountableGroup) -> SubsetSpec:
    return SubsetSpec(name="empty", group=group, member=lambda x: False)


def multiples(group: CountableGroup, k: int, residue: int = 0) -> SubsetSpec:
    """The integer residue class k.Z + residue."""
    if k <= 0:
        raise DomainError("modulus must be positive")
    return SubsetSpec(
        name=f"{k}Z+{residue}" if residue else f"{k}Z",
        group=group,
        member=lambda x: x % k == residue % k,
    )


def shift_left(e: SubsetSpec, g) -> SubsetSpec:
    """gE: membership x -> member(g^{-1} x)."""
    group = e.group
    ginv = group.inv(g)
    return SubsetSpec(
        name=f"{g!r}.{e.name}",
        group=group,
        member=lambda x: e.member(group.op(ginv, x)),
        provenance=f"left shift of {e.name} by {g!r}",
    )


def shift_right(e: SubsetSpec, g) -> SubsetSpec:
    """Eg: membership x -> member(x g^{-1})."""
    group = e.group
    ginv = group.inv(g)
    return SubsetSpec(
        name=f"{e.name}.{g!r}",
        group=group,
        member=lambda x: e.member(group.op(x, ginv)),
        provenance=f"right shift of {e.name} by {g!r}",
    )


def union(e: SubsetSpec, f: SubsetSpec) -> SubsetSpec:
    _same_backend(e, f)
    return SubsetSpec(
        name=f"({e.name})|({f.name})",
        group=e.group,
        member=lambda x: e.member(x) or f.member(x),
    )


def intersection(e: SubsetSpec, f: SubsetSpec) -> SubsetSpec:
    _same_backend(e, f)
    return SubsetSpec(
        name=f"({e.name})&({f.name})",
        group=e.group,
        member=lambda x: e.member(x) and f.member(x),
    )


def complement(e: SubsetSpec) -> SubsetSpec:
    return SubsetSpec(
        name=f"~({e.name})",
        group=e.group,
        member=lambda x: not e.member(x),
    )


def difference(e: SubsetSpec, f: SubsetSpec) -> SubsetSpec:
    _same_backend(e, f)
    return SubsetSpec(
        name=f"({e.name})-({f.name})",
        group=e.group,
        member=lambda x: e.member(x) and not f.member(x),
    )


def symmetric_difference(e: SubsetSpec, f: SubsetSpec) -> SubsetSpec:
    _same_backend(e, f)
    return SubsetSpec(
        name=f"({e.name})^({f.name})",
        group=e.group,
        member=lambda x: e.member(x) != f.member(x),
    )


def materialize(e: SubsetSpec, window: Iterable) -> frozenset:
    """{x in window : member(x)}."""
    return frozenset(x for x in window if e.member(x))


@dataclass(frozen=True)
class DensityReport:
    """Exact counts |E ∩ Phi_N| per tested index, with window estimates.

    upper_estimate / lower_estimate are the max / min ratio over the tail
    half of the tested range: heuristics for limsup / liminf, never limits.
    """

    set_name: str
    sequence_name: str
    rows: tuple  # of (N, count, size, Fraction)

    @property
    def upper_estimate(self) -> Fraction:
        tail = self.rows[len(self.rows) // 2 :]
        return max(r[3] for r in tail)

    @property
    def lower_estimate(self) -> Fraction:
        tail = self.rows[len(self.rows) // 2 :]
        return min(r[3] for r in tail)

    def ratio_at(self, n: int) -> Fraction:
        for row in self.rows:
            if row[0] == n:
                return row[3]
        raise KeyError(n)


def density_along(
    e: SubsetSpec, phi: FolnerSequence, indices: Sequence[int]
) -> DensityReport:
    """Count |E ∩ Phi_N| / |Phi_N| exactly at each tested index."""
    if not indices:
        raise DomainError("index range must be non-empty")
    rows = []
    for n in indices:
        window = phi.at(n)
        count = sum(1 for x in window if e.member(x))
        rows.append((n, count, len(window), Fraction(count, len(window))))
    return DensityReport(
        set_name=e.name, sequence_name=phi.name, rows=tuple(rows)
    )


def rle_encode(values: Iterable[int]) -> list:
    """Run-length encode a set of integers as [start, length] runs."""
    runs = []
    for v in sorted(set(values)):
        if runs and v == runs[-1][0] + runs[-1][1]:
            runs[-1][1] += 1
        else:
            runs.append([v, 1])
    return runs


def rle_decode(runs: Iterable) -> list:
    out = []
    for start, length in runs:
        out.extend(range(start, start + length))
    return out
