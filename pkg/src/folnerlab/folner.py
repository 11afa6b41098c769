"""Folner sequences and Reiter weights for the supported groups.

Defects are reported as symmetric-difference ratios |Phi ^ gPhi| / |Phi|,
which tend to 0 exactly when the intersection ratio tends to 1.  All ratios
are exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable

from .errors import DomainError
from .groups import ALT, Z, CountableGroup, transposition_pair

__all__ = [
    "FolnerSequence",
    "ReiterWeights",
    "interval_sequence",
    "symmetric_interval_sequence",
    "box_sequence",
    "alt_sequence",
    "left_defect",
    "right_defect",
    "invert",
    "translated",
    "reiter_from_folner",
    "two_sided_reiter",
    "slice_weights",
    "unslice_check",
]


@dataclass(frozen=True)
class FolnerSequence:
    """Index -> finite subset of the group, with a claimed handedness.

    The handedness is metadata: built-in sequences come with a claim that can
    be (and is, in the tests) checked empirically via the defect functions.
    """

    group: CountableGroup
    name: str
    window: Callable[[int], frozenset]
    handedness: str = "left"  # one of left / right / two-sided
    min_index: int = 1

    def at(self, n: int) -> frozenset:
        if n < self.min_index:
            raise DomainError(
                f"{self.name} is indexed from {self.min_index}; got {n}"
            )
        result = self.window(n)
        if not result:
            raise DomainError(f"{self.name} produced an empty window at {n}")
        return result


def interval_sequence(group: CountableGroup = Z, start: int = 0) -> FolnerSequence:
    """Phi_N = [start, start + N) in the integers."""
    return FolnerSequence(
        group=group,
        name=f"interval[{start},{start}+N)",
        window=lambda n: frozenset(range(start, start + n)),
        handedness="two-sided",
    )


def symmetric_interval_sequence(group: CountableGroup = Z) -> FolnerSequence:
    """Phi_N = [-N, N] in the integers."""
    return FolnerSequence(
        group=group,
        name="interval[-N,N]",
        window=lambda n: frozenset(range(-n, n + 1)),
        handedness="two-sided",
    )


def box_sequence(lattice) -> FolnerSequence:
    """Phi_N = [0, N)^d in an integer lattice."""
    import itertools

    return FolnerSequence(
        group=lattice,
        name="box[0,N)^d",
        window=lambda n: frozenset(
            itertools.product(range(n), repeat=lattice.dim)
        ),
        handedness="two-sided",
    )


@lru_cache(maxsize=None)
def _alt_window(n: int) -> frozenset:
    # A_{n-1} . h_n  with h_n = (1 n)(2 3)
    h = transposition_pair(n)
    return frozenset(a * h for a in ALT.supported_in(n - 1))


def alt_sequence() -> FolnerSequence:
    """The left Folner sequence Phi_n = A_{n-1} h_n in the even finitary
    permutations, indexed from n = 4."""
    return FolnerSequence(
        group=ALT,
        name="alt-coset",
        window=_alt_window,
        handedness="left",
        min_index=4,
    )


def left_defect(phi: FolnerSequence, n: int, g) -> Fraction:
    """|Phi_n ^ g Phi_n| / |Phi_n| as an exact rational in [0, 2]."""
    window = phi.at(n)
    shifted = {phi.group.op(g, x) for x in window}
    return Fraction(len(window.symmetric_difference(shifted)), len(window))


def right_defect(phi: FolnerSequence, n: int, g) -> Fraction:
    """|Phi_n ^ Phi_n g| / |Phi_n| as an exact rational in [0, 2]."""
    window = phi.at(n)
    shifted = {phi.group.op(x, g) for x in window}
    return Fraction(len(window.symmetric_difference(shifted)), len(window))


_FLIP = {"left": "right", "right": "left", "two-sided": "two-sided"}


def invert(phi: FolnerSequence) -> FolnerSequence:
    """N -> Phi_N^{-1}; turns a left sequence into a right one (discrete
    groups are unimodular)."""
    return FolnerSequence(
        group=phi.group,
        name=phi.name + "^-1",
        window=lambda n: frozenset(phi.group.inv(x) for x in phi.at(n)),
        handedness=_FLIP[phi.handedness],
        min_index=phi.min_index,
    )


def translated(phi: FolnerSequence, shifts: Callable[[int], object]) -> FolnerSequence:
    """N -> Phi_N . h_N; right translation leaves left defects unchanged."""
    return FolnerSequence(
        group=phi.group,
        name=phi.name + ".h_N",
        window=lambda n: frozenset(phi.group.op(x, shifts(n)) for x in phi.at(n)),
        handedness=phi.handedness if phi.handedness == "left" else "left",
        min_index=phi.min_index,
    )


@dataclass(frozen=True)
class ReiterWeights:
    """Non-negative rational weights of total mass 1 on a finite support."""

    weights: dict = field(repr=False)
    total: Fraction = Fraction(1)

    @property
    def support(self) -> frozenset:
        return frozenset(x for x, w in self.weights.items() if w > 0)

    def weight(self, x) -> Fraction:
        return self.weights.get(x, Fraction(0))


def reiter_from_folner(phi: FolnerSequence, n: int) -> ReiterWeights:
    """Uniform weights 1/|Phi_n| on Phi_n."""
    window = phi.at(n)
    w = Fraction(1, len(window))
    return ReiterWeights(weights={x: w for x in window})


def two_sided_reiter(phi: FolnerSequence, n: int) -> ReiterWeights:
    """Autocorrelation weights w(x) = |Phi_n ∩ x Phi_n| / |Phi_n|^2.

    This is the normalized convolution of the uniform weights with their
    involution, and has total mass exactly 1.
    """
    window = phi.at(n)
    group = phi.group
    counts: dict = {}
    for a in window:
        for b in window:
            # x with a = x.b, i.e. x = a.b^{-1}
            x = group.op(a, group.inv(b))
            counts[x] = counts.get(x, 0) + 1
    denom = len(window) ** 2
    return ReiterWeights(weights={x: Fraction(c, denom) for x, c in counts.items()})


def slice_weights(w: ReiterWeights, h: Fraction) -> frozenset:
    """Strict superlevel set {x : w(x) > h}; nested in h."""
    if h <= 0:
        raise DomainError("slice level must be positive")
    return frozenset(x for x, v in w.weights.items() if v > h)


def unslice_check(w: ReiterWeights) -> bool:
    """Layer-cake reconstruction: each weight must equal the sum of the level
    gaps of the superlevel sets containing it, the mass must be exactly 1 and
    agree with the stored total.  Exact rational arithmetic throughout."""
    values = list(w.weights.values())
    if any(v < 0 for v in values):
        return False
    if sum(values, Fraction(0)) != 1 or w.total != 1:
        return False
    levels = sorted({Fraction(0)} | {v for v in values if v > 0})
    for x, v in w.weights.items():
        acc = Fraction(0)
        for lo, hi in zip(levels, levels[1:]):
            if v > lo:  # x lies in the superlevel set {w > lo}
                acc += hi - lo
        if acc != v:
            return False
    return True
