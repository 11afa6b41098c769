"""Explicit set constructions: progression-tail removal sets of near-full
density, greedy disjoint-translate covers, shrinking syndetic families with
cofinite trimming, a large-density set that window detectors cannot certify
as piecewise syndetic, a coset-union example in the even finitary
permutations, and the doubling set with a uniquely isolated member.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import CalibrationError, DomainError
from .folner import FolnerSequence, alt_sequence
from .groups import ALT, Z, CountableGroup, Perm, transposition_pair
from .subsets import SubsetSpec, density_along, from_finite

__all__ = [
    "StrausParams",
    "SyndeticFamily",
    "TrimResult",
    "NonPwsResult",
    "straus_set",
    "straus_interval_mask",
    "greedy_disjoint_cover",
    "shrinking_syndetic_family",
    "cofinite_trim",
    "non_pws_large_set",
    "alt_group_example",
    "fpd_obstruction_check",
    "doubling_example",
]


@dataclass(frozen=True)
class StrausParams:
    """Schedule of removed progression tails {a_n k + n : k >= b_n}.

    The fixed family a_n = 2^n * ceil(2/eps), b_n = 1 certifies
    sum 1/a_n <= eps, hence a lower density bound of 1 - eps.
    """

    epsilon: Fraction
    base: int

    @classmethod
    def from_epsilon(cls, epsilon) -> "StrausParams":
        eps = Fraction(epsilon)
        if not 0 < eps < 1:
            raise DomainError("epsilon must lie strictly between 0 and 1")
        return cls(epsilon=eps, base=math.ceil(2 / eps))

    def modulus(self, n: int) -> int:
        return (2 ** n) * self.base

    def tail_start(self, n: int) -> int:
        return 1

    def removal_mass(self, n_max: int) -> Fraction:
        return sum(
            (Fraction(1, self.modulus(n)) for n in range(1, n_max + 1)),
            Fraction(0),
        )


def straus_set(epsilon) -> SubsetSpec:
    """Positive integers minus the tails {a_n k + n : k >= 1}.

    For a given x only the levels with a_n + n <= x can remove it, so
    membership needs at most log2(x) progression checks.
    """
    params = StrausParams.from_epsilon(epsilon)

    def member(x) -> bool:
        if x < 1:
            return False
        n = 1
        while params.modulus(n) + n <= x:
            a = params.modulus(n)
            if (x - n) % a == 0 and (x - n) // a >= params.tail_start(n):
                return False
            n += 1
        return True

    return SubsetSpec(
        name=f"straus:eps={params.epsilon}",
        group=Z,
        member=member,
        provenance="progression-tail removal, moduli 2^n * ceil(2/eps)",
    )


def straus_interval_mask(epsilon, lo: int, hi: int) -> np.ndarray:
    """Boolean membership of the same set over [lo, hi], sieve-style.

    Index i corresponds to the integer lo + i; agrees pointwise with
    straus_set(epsilon).member.
    """
    if lo > hi:
        raise DomainError("empty interval")
    params = StrausParams.from_epsilon(epsilon)
    mask = np.zeros(hi - lo + 1, dtype=bool)
    first_pos = max(lo, 1)
    if first_pos <= hi:
        mask[first_pos - lo :] = True
    n = 1
    while params.modulus(n) + n <= hi:
        a = params.modulus(n)
        start = a * params.tail_start(n) + n
        if start < lo:
            start += ((lo - start + a - 1) // a) * a
        mask[start - lo :: a] = False
        n += 1
    return mask


def greedy_disjoint_cover(
    group: CountableGroup, s: Iterable, f: Iterable, order: Optional[Sequence] = None
) -> frozenset:
    """Greedy S' with pairwise disjoint translates f.S' (f in F) and
    F^{-1} F S' covering S.

    Scans S in ascending order (or the given order), accepting x whenever
    F.x avoids all translates of previously accepted points.  A rejected x
    collides with some accepted y, so x = f1^{-1} f2 y stays covered.
    """
    f = list(f)
    if not f:
        raise DomainError("shift set F must be non-empty")
    members = frozenset(s)
    if order is None:
        try:
            scan = sorted(members)
        except TypeError:
            scan = list(s)
    else:
        scan = [x for x in order if x in members]
    occupied: set = set()
    accepted = []
    for x in scan:
        translates = [group.op(g, x) for g in f]
        if occupied.isdisjoint(translates):
            accepted.append(x)
            occupied.update(translates)
    return frozenset(accepted)


@dataclass(frozen=True)
class SyndeticFamily:
    """Nested levels S_1 ⊇ S_2 ⊇ ... with certified disjoint shift sets.

    shift_sets[k] holds the F used to build level k+1; level k's window
    density is at most 1/|F| up to the window boundary.
    """

    group: CountableGroup
    window: frozenset
    levels: tuple  # of frozenset
    shift_sets: tuple  # of tuple
    partial: bool = False

    def level(self, n: int) -> frozenset:
        if not 1 <= n <= len(self.levels):
            raise DomainError(f"family has {len(self.levels)} levels; asked for {n}")
        return self.levels[n - 1]


def shrinking_syndetic_family(
    group: CountableGroup,
    depth: int,
    window: Iterable,
    shift_counts: Optional[Sequence[int]] = None,
) -> SyndeticFamily:
    """Iterate the greedy cover with growing shift sets drawn from the
    group's canonical enumeration.

    Level n uses the first shift_counts[n-1] enumeration elements as F
    (default n), so its window density is at most 1/n plus boundary.  A
    window smaller than some level's shift set cannot honour that bound
    and marks the family partial.
    """
    if depth < 1:
        raise DomainError("depth must be >= 1")
    counts = list(shift_counts) if shift_counts is not None else list(range(1, depth + 1))
    if len(counts) != depth:
        raise DomainError("need one shift count per level")
    if any(b < a for a, b in zip(counts, counts[1:])):
        raise DomainError("shift counts must be non-decreasing")
    window = frozenset(window)
    current = window
    levels = []
    shift_sets = []
    partial = False
    for m in counts:
        f = tuple(group.enumerate_element(i) for i in range(m))
        current = greedy_disjoint_cover(group, current, f)
        levels.append(current)
        shift_sets.append(f)
        if len(window) < m or not current:
            partial = True
    return SyndeticFamily(
        group=group,
        window=window,
        levels=tuple(levels),
        shift_sets=tuple(shift_sets),
        partial=partial,
    )


@dataclass(frozen=True)
class TrimResult:
    """Cofinitely trimmed sets A_i' = A_i minus an initial block of the
    Folner sequence, with the calibration cutoffs that justify the trim."""

    sets: tuple  # of SubsetSpec
    cutoffs: tuple  # of int, one s_i per input
    estimates: tuple  # of Fraction, per-input upper-density estimates
    certified_bound: Fraction  # sum of estimates + epsilon


def cofinite_trim(
    a_list: Sequence[SubsetSpec],
    phi: FolnerSequence,
    epsilon,
    n_cal: Sequence[int],
) -> TrimResult:
    """Trim each A_i below a calibrated index so the union's window upper
    density is at most the sum of the per-set estimates plus epsilon.

    s_i is the least tested index with |A_i ∩ Phi_N| / |Phi_N| below
    est_i + epsilon / 2^i for every tested N > s_i; failure to find one
    raises a calibration error naming i.
    """
    eps = Fraction(epsilon)
    if eps <= 0:
        raise DomainError("epsilon must be positive")
    indices = sorted(n_cal)
    if not indices:
        raise DomainError("calibration range must be non-empty")
    trimmed = []
    cutoffs = []
    estimates = []
    prefix_cache: dict = {}

    def prefix_union(s: int) -> frozenset:
        if s < phi.min_index:
            return frozenset()
        if s not in prefix_cache:
            acc: set = set()
            for n in range(phi.min_index, s + 1):
                acc |= phi.at(n)
            prefix_cache[s] = frozenset(acc)
        return prefix_cache[s]

    for i, a in enumerate(a_list, start=1):
        report = density_along(a, phi, indices)
        est = report.upper_estimate
        slack = eps / (2 ** i)
        violations = [r[0] for r in report.rows if r[3] >= est + slack]
        s_i = max(violations) if violations else 0
        if s_i >= indices[-1]:
            raise CalibrationError(
                f"no trim cutoff for input {i} within the tested range", index=i
            )
        removed = prefix_union(s_i)
        trimmed.append(
            SubsetSpec(
                name=f"{a.name}'",
                group=a.group,
                member=lambda x, a=a, removed=removed: a.member(x) and x not in removed,
                provenance=f"{a.name} minus the first {s_i} sequence windows",
            )
        )
        cutoffs.append(s_i)
        estimates.append(est)
    return TrimResult(
        sets=tuple(trimmed),
        cutoffs=tuple(cutoffs),
        estimates=tuple(estimates),
        certified_bound=sum(estimates, Fraction(0)) + eps,
    )


@dataclass(frozen=True)
class NonPwsResult:
    """Window complement of a union of shifted syndetic levels.

    The removal schedule certifies sum(1/|F_k|) <= epsilon, so the window
    lower density of Q is at least 1 - epsilon - boundary.  For K whose
    inverses all appear among the stored translates, every point of
    core_for(K) lies outside K.Q, which blocks thickness of K.Q at any
    probe scale below the core's covering gap.
    """

    q: SubsetSpec
    family: SyndeticFamily
    translates: tuple  # g_i, i-th enumeration element
    trimmed_levels: tuple  # of frozenset, cofinitely trimmed level sets
    trim_cutoffs: tuple
    schedule_mass: Fraction  # sum over levels of 1/|F|
    boundary: Fraction
    window: frozenset = field(repr=False)

    def core_for(self, k_set: Iterable) -> frozenset:
        group = self.family.group
        needed = {group.inv(k) for k in k_set}
        missing = needed - set(self.translates)
        if missing:
            raise DomainError(
                f"translate list does not cover K^-1: missing {list(missing)}"
            )
        core = self.window
        for g, level in zip(self.translates, self.trimmed_levels):
            if g in needed:
                core = core & level
        return core


def _non_pws_schedule(epsilon: Fraction, depth: int) -> list:
    # three flat levels then doubling: mass <= 3/c + 1/c = 4/c <= epsilon
    c = math.ceil(4 / epsilon)
    return [c if k <= 3 else c * 2 ** (k - 3) for k in range(1, depth + 1)]


def non_pws_large_set(
    group: CountableGroup,
    phi: FolnerSequence,
    epsilon,
    depth: int,
    window: Iterable,
) -> NonPwsResult:
    """Q = window minus the union of g_i . S_i' over a shrinking syndetic
    family, g_i the canonical enumeration.

    The shift-count schedule starts flat at c = ceil(4/epsilon) and then
    doubles, keeping the total removed mass below epsilon while the first
    three levels coincide: the covering gap of the K = {id}, {id, g, g^-1}
    cores stays at c.
    """
    eps = Fraction(epsilon)
    if not 0 < eps < 1:
        raise DomainError("epsilon must lie strictly between 0 and 1")
    if depth < 1:
        raise DomainError("depth must be >= 1")
    window = frozenset(window)
    counts = _non_pws_schedule(eps, depth)
    family = shrinking_syndetic_family(group, depth, window, shift_counts=counts)
    schedule_mass = sum((Fraction(1, m) for m in counts), Fraction(0))
    assert schedule_mass <= eps

    level_specs = [
        from_finite(group, level, name=f"S_{k}")
        for k, level in enumerate(family.levels, start=1)
    ]
    trim = cofinite_trim(level_specs, phi, eps / 2, _calibration_indices(window))
    trimmed_levels = tuple(
        frozenset(x for x in level if spec.member(x))
        for level, spec in zip(family.levels, trim.sets)
    )
    translates = tuple(group.enumerate_element(i) for i in range(depth))
    removed = set()
    for g, level in zip(translates, trimmed_levels):
        removed.update(group.op(g, x) for x in level)
    removed = frozenset(removed)

    member_window = window

    def member(x) -> bool:
        return x in member_window and x not in removed

    boundary = sum(
        (Fraction(_shift_diameter(group, fs), len(window)) for fs in family.shift_sets),
        Fraction(0),
    )
    q = SubsetSpec(
        name=f"nonpws:eps={eps}",
        group=group,
        member=member,
        provenance="window complement of shifted shrinking syndetic levels",
    )
    return NonPwsResult(
        q=q,
        family=family,
        translates=translates,
        trimmed_levels=trimmed_levels,
        trim_cutoffs=trim.cutoffs,
        schedule_mass=schedule_mass,
        boundary=boundary,
        window=window,
    )


def _calibration_indices(window: frozenset) -> list:
    top = len(window)
    step = max(1, top // 20)
    return list(range(step, top + 1, step))


def _shift_diameter(group: CountableGroup, shifts: tuple) -> int:
    if group is Z or all(isinstance(g, int) for g in shifts):
        return max(shifts) - min(shifts) if shifts else 0
    return len(shifts)


def alt_group_example(n_max: int):
    """The coset-union set of full density in the even finitary
    permutations, paired with its left Folner sequence of cosets.

    Level n is A_{n-1} . h_n with h_n = (1 n)(2 3); membership in the union
    over n >= 5 is decided from sigma(1) = n plus the coset test.
    """
    if not 5 <= n_max <= 10:
        raise DomainError("n_max must be between 5 and 10")
    phi = alt_sequence()

    def member(sigma) -> bool:
        if not isinstance(sigma, Perm):
            return False
        n = sigma(1)
        if n < 5:
            return False
        if sigma.max_moved() > n:
            return False
        # sigma in A_{n-1} h_n iff sigma h_n moves nothing above n-1
        return (sigma * transposition_pair(n)).max_moved() <= n - 1

    e = SubsetSpec(
        name=f"alt-coset-union<= {n_max}",
        group=ALT,
        member=member,
        provenance="union of coset levels A_{n-1}.h_n for n >= 5",
    )
    return phi, e


def fpd_obstruction_check(
    e: SubsetSpec, phi: FolnerSequence, n: int, window_level: int
) -> bool:
    """Exhaustively verify g.h leaves E for h in level n+1 and g in every
    strictly higher level up to the window level."""
    if not n + 1 < window_level <= 9:
        raise DomainError("need n + 1 < window_level <= 9")
    group = e.group
    base = phi.at(n + 1)
    for j in range(n + 2, window_level + 1):
        for g in phi.at(j):
            for h in base:
                if e.member(group.op(g, h)):
                    return False
    return True


def doubling_example(q: SubsetSpec) -> SubsetSpec:
    """2Q ∪ (2Q+1) ∪ {1}: every member except 1 arrives with a neighbor.

    Requires 0 and 1 outside Q; shift Q first otherwise, as the doubled
    images of 0 and 1 would crowd the isolated member 1.
    """
    if q.member(0) or q.member(1):
        raise DomainError("Q must avoid 0 and 1; shift Q before doubling")

    def member(x) -> bool:
        if x == 1:
            return True
        if x % 2 == 0:
            return q.member(x // 2)
        return q.member((x - 1) // 2)

    return SubsetSpec(
        name=f"double({q.name})",
        group=q.group,
        member=member,
        provenance=f"2Q ∪ (2Q+1) ∪ {{1}} from {q.name}",
    )
