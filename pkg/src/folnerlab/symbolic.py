"""Window-scale symbolic dynamics on indicator configurations: orbit
points, cylinder patterns, and empirical pattern frequencies along Folner
averages.  Nothing here materializes an orbit closure; every statement is a
finite pattern count with an exact rational answer.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DomainError
from .folner import FolnerSequence
from .subsets import SubsetSpec
from .structures import is_syndetic_window

__all__ = [
    "Pattern",
    "EmpiricalMeasure",
    "ProbeReport",
    "pattern_from_bits",
    "all_patterns",
    "orbit_point",
    "empirical_measure",
    "pattern_distribution",
    "interval_frequency_series",
    "syndetic_orbit_probe",
    "unique_pattern_check",
]


@dataclass(frozen=True)
class Pattern:
    """A finite 0/1 assignment: sorted tuple of (cell, bit) pairs."""

    cells: tuple

    def __post_init__(self):
        seen = set()
        for cell, bit in self.cells:
            if bit not in (0, 1):
                raise DomainError("pattern bits must be 0 or 1")
            if cell in seen:
                raise DomainError(f"cell {cell!r} assigned twice")
            seen.add(cell)

    @property
    def domain(self) -> tuple:
        return tuple(cell for cell, _ in self.cells)

    def bit(self, cell) -> int:
        for c, b in self.cells:
            if c == cell:
                return b
        raise KeyError(cell)

    def flipped(self) -> "Pattern":
        return Pattern(tuple((c, 1 - b) for c, b in self.cells))


def _canonical(pairs: Iterable) -> tuple:
    pairs = list(pairs)
    try:
        return tuple(sorted(pairs))
    except TypeError:
        return tuple(pairs)


def pattern_from_bits(bits: dict) -> Pattern:
    return Pattern(_canonical((c, int(b)) for c, b in bits.items()))


def all_patterns(domain: Sequence):
    """The 2^|domain| patterns on a fixed domain."""
    cells = list(domain)
    for bits in itertools.product((0, 1), repeat=len(cells)):
        yield Pattern(_canonical(zip(cells, bits)))


def orbit_point(q: SubsetSpec, g, domain: Sequence) -> Pattern:
    """The translated configuration restricted to the domain:
    bit(x) = 1 iff x.g lies in Q."""
    group = q.group
    return Pattern(
        _canonical((x, int(q.member(group.op(x, g)))) for x in domain)
    )


@dataclass(frozen=True)
class EmpiricalMeasure:
    """Fraction of window translates whose orbit point matches a cylinder."""

    cylinder: Pattern
    index: int
    frequency: Fraction


def empirical_measure(
    q: SubsetSpec, psi: FolnerSequence, n: int, cylinder: Pattern
) -> EmpiricalMeasure:
    """Exact count of g in the window with orbit pattern equal to the
    cylinder on its domain."""
    window = psi.at(n)
    domain = cylinder.domain
    hits = sum(1 for g in window if orbit_point(q, g, domain) == cylinder)
    return EmpiricalMeasure(
        cylinder=cylinder, index=n, frequency=Fraction(hits, len(window))
    )


def pattern_distribution(
    q: SubsetSpec, psi: FolnerSequence, n: int, domain: Sequence
) -> dict:
    """Empirical frequency of every pattern on the domain; sums to 1."""
    window = psi.at(n)
    counts: dict = {}
    for g in window:
        p = orbit_point(q, g, domain)
        counts[p] = counts.get(p, 0) + 1
    out = {p: Fraction(c, len(window)) for p, c in counts.items()}
    for p in all_patterns(domain):
        out.setdefault(p, Fraction(0))
    return out


def interval_frequency_series(
    q: SubsetSpec, cylinder: Pattern, n_max: int, step: int = 2
) -> list:
    """Frequencies of the cylinder along the integer windows [0, step*N)
    for N = 1..n_max, computed incrementally.

    Equivalent to empirical_measure at each index but touches each
    translate once, so the whole series costs one window scan.
    """
    if n_max < 1 or step < 1:
        raise DomainError("n_max and step must be positive")
    domain = cylinder.domain
    if any(not isinstance(x, int) for x in domain):
        raise DomainError("integer cylinders only")
    out = []
    hits = 0
    g = 0
    for n in range(1, n_max + 1):
        while g < step * n:
            if orbit_point(q, g, domain) == cylinder:
                hits += 1
            g += 1
        out.append(Fraction(hits, step * n))
    return out


@dataclass(frozen=True)
class ProbeReport:
    """Translates whose configuration looked syndetic at the tested scale."""

    k_size: int
    sampled: int
    positives: tuple


def syndetic_orbit_probe(
    q: SubsetSpec, k_set: Iterable, samples: Iterable, domain: Iterable
) -> ProbeReport:
    """Test each sampled translate's configuration for (K, domain)
    syndeticity; positives list the translates that passed."""
    group = q.group
    ks = list(k_set)
    window = list(domain)
    dom = frozenset(window)
    positives = []
    count = 0
    for g in samples:
        count += 1
        translated = SubsetSpec(
            name=f"{q.name}.g",
            group=group,
            member=lambda x, g=g: q.member(group.op(x, g)),
        )
        if is_syndetic_window(translated, ks, window, domain=dom):
            positives.append(g)
    return ProbeReport(k_size=len(ks), sampled=count, positives=tuple(positives))


def unique_pattern_check(qp: SubsetSpec, window: Iterable) -> bool:
    """1 must belong with both neighbors absent, and be the only such
    member: every other member in the window has a neighbor inside."""
    if not qp.member(1) or qp.member(0) or qp.member(2):
        return False
    for n in window:
        if n == 1 or not qp.member(n):
            continue
        if not (qp.member(n - 1) or qp.member(n + 1)):
            return False
    return True
