"""Countable group backends: integers, integer lattices, and finitely
supported permutations of the positive integers together with the even
(alternating) subgroup.

Elements are plain hashable values: ``int`` for the integers, tuples of
``int`` for lattices, and :class:`Perm` for permutation groups.  Each
backend provides the group operation, inversion, a canonical enumeration
(a bijection from the non-negative integers onto the group) and a nested
exhaustion by finite sets.
"""

from __future__ import annotations

import itertools
import re
from functools import lru_cache

from .errors import BackendMismatchError, DomainError, UnsupportedOperationError

__all__ = [
    "Perm",
    "PERM_ID",
    "parse_cycles",
    "cycle",
    "group_by_name",
    "CountableGroup",
    "IntegerGroup",
    "IntegerLattice",
    "SymmetricFinitary",
    "AlternatingFinitary",
    "Z",
    "SYM",
    "ALT",
    "multiply",
    "sign",
    "transposition_pair",
]


class Perm:
    """A finitely supported permutation of {1, 2, 3, ...}.

    Stored in canonical form as a sorted tuple of (point, image) pairs with
    fixed points omitted, so two permutations representing the same function
    compare (and hash) equal.
    """

    __slots__ = ("pairs", "_map", "_sign")

    def __init__(self, mapping=()):
        if isinstance(mapping, dict):
            items = mapping.items()
        else:
            items = tuple(mapping)
        cleaned = {}
        for p, q in items:
            if p < 1 or q < 1:
                raise DomainError("permutation points must be positive integers")
            if p in cleaned:
                raise DomainError(f"point {p} mapped twice")
            cleaned[p] = q
        # drop fixed points, then check bijectivity on the support
        cleaned = {p: q for p, q in cleaned.items() if p != q}
        if set(cleaned) != set(cleaned.values()):
            raise DomainError("mapping is not a bijection on its support")
        self.pairs = tuple(sorted(cleaned.items()))
        self._map = cleaned
        self._sign = None

    def __call__(self, x: int) -> int:
        return self._map.get(x, x)

    def __mul__(self, other: "Perm") -> "Perm":
        """Composition: (g * h)(x) = g(h(x))."""
        if not isinstance(other, Perm):
            return NotImplemented
        points = set(self._map) | set(other._map)
        return Perm({x: self(other(x)) for x in points})

    def inverse(self) -> "Perm":
        return Perm({q: p for p, q in self.pairs})

    @property
    def support(self) -> frozenset:
        return frozenset(self._map)

    def max_moved(self) -> int:
        """Largest moved point; 0 for the identity."""
        return self.pairs[-1][0] if self.pairs else 0

    def sign(self) -> int:
        """Parity: +1 for even permutations, -1 for odd.  Memoized."""
        if self._sign is not None:
            return self._sign
        seen = set()
        parity = 0
        for start in self._map:
            if start in seen:
                continue
            length = 0
            x = start
            while x not in seen:
                seen.add(x)
                x = self._map[x]
                length += 1
            parity += length - 1
        self._sign = -1 if parity % 2 else 1
        return self._sign

    def cycles(self) -> list:
        out = []
        seen = set()
        for start, _ in self.pairs:
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            x = self._map[start]
            while x != start:
                cyc.append(x)
                seen.add(x)
                x = self._map[x]
            out.append(tuple(cyc))
        return out

    def __str__(self) -> str:
        if not self.pairs:
            return "()"
        return "".join("(" + " ".join(str(x) for x in c) + ")" for c in self.cycles())

    def __repr__(self) -> str:
        return f"Perm[{self}]"

    def __eq__(self, other) -> bool:
        return isinstance(other, Perm) and self.pairs == other.pairs

    def __hash__(self) -> int:
        return hash(self.pairs)


PERM_ID = Perm()

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str) -> Perm:
    """Parse cycle notation, e.g. ``"(1 5)(2 3)"``; ``"()"`` is the identity."""
    text = text.strip()
    if text in ("", "()"):
        return PERM_ID
    if text.replace(" ", "").count("(") != len(_CYCLE_RE.findall(text)):
        raise DomainError(f"malformed cycle string: {text!r}")
    mapping = {}
    for body in _CYCLE_RE.findall(text):
        pts = [int(tok) for tok in body.replace(",", " ").split()]
        if not pts:
            continue
        for a, b in zip(pts, pts[1:] + pts[:1]):
            if a in mapping:
                raise DomainError(f"point {a} appears in two cycles: {text!r}")
            mapping[a] = b
    return Perm(mapping)


def cycle(*points: int) -> Perm:
    """The cyclic permutation sending points[0] -> points[1] -> ... -> points[0]."""
    return Perm({a: b for a, b in zip(points, points[1:] + points[:1])})


class CountableGroup:
    """Abstract countable group with enumeration and exhaustion.

    Subclasses fix an element backend and implement ``_op``, ``_inv``,
    ``contains``, ``enumerate_element`` and ``exhaustion``.
    """

    name = "abstract"
    identity = None

    def contains(self, g) -> bool:
        raise NotImplementedError

    def _check(self, g):
        if not self.contains(g):
            raise BackendMismatchError(
                f"{g!r} is not an element of the {self.name} backend"
            )
        return g

    def op(self, g, h):
        self._check(g)
        self._check(h)
        return self._op(g, h)

    def inv(self, g):
        self._check(g)
        return self._inv(g)

    def enumerate_element(self, i: int):
        """The i-th element (i >= 0) of the canonical enumeration."""
        raise NotImplementedError

    def exhaustion(self, n: int) -> frozenset:
        """Nested finite sets whose union is the whole group."""
        raise NotImplementedError

    def elements(self):
        """Iterate the canonical enumeration indefinitely."""
        i = 0
        while True:
            yield self.enumerate_element(i)
            i += 1


class IntegerGroup(CountableGroup):
    name = "z"
    identity = 0

    def contains(self, g) -> bool:
        return isinstance(g, int) and not isinstance(g, bool)

    def _op(self, g, h):
        return g + h

    def _inv(self, g):
        return -g

    def enumerate_element(self, i: int) -> int:
        # 0, 1, -1, 2, -2, ...
        if i < 0:
            raise DomainError("enumeration index must be non-negative")
        return (i + 1) // 2 if i % 2 else -(i // 2)

    def exhaustion(self, n: int) -> frozenset:
        if n < 1:
            raise DomainError("exhaustion level must be >= 1")
        return frozenset(range(-n, n + 1))


class IntegerLattice(CountableGroup):
    """The free abelian group Z^d with componentwise addition."""

    def __init__(self, dim: int):
        if dim < 1:
            raise DomainError("lattice dimension must be >= 1")
        self.dim = dim
        self.name = f"z{dim}"
        self.identity = (0,) * dim

    def contains(self, g) -> bool:
        return (
            isinstance(g, tuple)
            and len(g) == self.dim
            and all(isinstance(c, int) and not isinstance(c, bool) for c in g)
        )

    def _op(self, g, h):
        return tuple(a + b for a, b in zip(g, h))

    def _inv(self, g):
        return tuple(-a for a in g)

    def _shell(self, r: int) -> list:
        if r == 0:
            return [self.identity]
        box = [
            v
            for v in itertools.product(range(-r, r + 1), repeat=self.dim)
            if max(abs(c) for c in v) == r
        ]
        box.sort()
        return box

    def enumerate_element(self, i: int) -> tuple:
        if i < 0:
            raise DomainError("enumeration index must be non-negative")
        r = 0
        while True:
            shell = self._shell(r)
            if i < len(shell):
                return shell[i]
            i -= len(shell)
            r += 1

    def exhaustion(self, n: int) -> frozenset:
        if n < 1:
            raise DomainError("exhaustion level must be >= 1")
        return frozenset(itertools.product(range(-n, n + 1), repeat=self.dim))


@lru_cache(maxsize=None)
def _grade(n: int, even_only: bool) -> tuple:
    """Permutations whose largest moved point is exactly n, in lexicographic
    order of their image tuples on {1..n}."""
    if n < 2:
        return ()
    out = []
    for images in itertools.permutations(range(1, n + 1)):
        if images[n - 1] == n:
            continue  # does not move n
        p = Perm({i + 1: images[i] for i in range(n)})
        if even_only and p.sign() != 1:
            continue
        out.append(p)
    return tuple(out)


@lru_cache(maxsize=None)
def _symmetric_on(n: int, even_only: bool) -> frozenset:
    """All (even) permutations supported in {1..n}."""
    elems = [PERM_ID]
    for k in range(2, n + 1):
        elems.extend(_grade(k, even_only))
    return frozenset(elems)


class SymmetricFinitary(CountableGroup):
    """The group of finitely supported permutations of {1, 2, 3, ...}.

    Enumeration is graded by the largest moved point, lexicographic within a
    grade; the identity is element 0.
    """

    name = "sym"
    identity = PERM_ID
    even_only = False
    # exhaustion(1) already contains every double transposition on 4 points
    exhaustion_offset = 3

    def contains(self, g) -> bool:
        if not isinstance(g, Perm):
            return False
        return not self.even_only or g.sign() == 1

    def _op(self, g, h):
        return g * h

    def _inv(self, g):
        return g.inverse()

    def enumerate_element(self, i: int) -> Perm:
        if i < 0:
            raise DomainError("enumeration index must be non-negative")
        if i == 0:
            return PERM_ID
        i -= 1
        n = 2
        while True:
            grade = _grade(n, self.even_only)
            if i < len(grade):
                return grade[i]
            i -= len(grade)
            n += 1

    def exhaustion(self, n: int) -> frozenset:
        if n < 1:
            raise DomainError("exhaustion level must be >= 1")
        return _symmetric_on(n + self.exhaustion_offset, self.even_only)

    def supported_in(self, n: int) -> frozenset:
        """All (even) permutations of {1..n}; |result| = n! or n!/2."""
        return _symmetric_on(n, self.even_only)


class AlternatingFinitary(SymmetricFinitary):
    """The subgroup of even finitely supported permutations."""

    name = "alt"
    even_only = True


Z = IntegerGroup()
SYM = SymmetricFinitary()
ALT = AlternatingFinitary()

_GROUPS = {"z": Z, "sym": SYM, "alt": ALT}


def group_by_name(name: str) -> CountableGroup:
    key = name.lower()
    if key in _GROUPS:
        return _GROUPS[key]
    m = re.fullmatch(r"z(\d+)", key)
    if m:
        return IntegerLattice(int(m.group(1)))
    raise DomainError(f"unknown group id: {name!r}")


def multiply(group: CountableGroup, g, h):
    """Group product g.h; raises BackendMismatchError on foreign operands."""
    return group.op(g, h)


def sign(g) -> int:
    """Parity of a permutation; membership in the even subgroup is sign == 1."""
    if not isinstance(g, Perm):
        raise UnsupportedOperationError("sign is only defined for permutations")
    return g.sign()


@lru_cache(maxsize=None)
def transposition_pair(n: int) -> Perm:
    """The double transposition (1 n)(2 3); requires n >= 4."""
    if n < 4:
        raise DomainError("transposition_pair requires n >= 4")
    return Perm({1: n, n: 1, 2: 3, 3: 2})
