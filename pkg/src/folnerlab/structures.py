"""Structured-configuration machinery: finite sums and finite products
sets, window-scale syndetic / thick / piecewise-syndetic detectors, and
bounded searches for chains whose product sets sit inside a target set.

Every detector that searches reports the exact bounds it covered, so a
negative answer is always scoped to a (K, W) pair and never absolute.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import BudgetExceededError, DomainError
from .groups import CountableGroup
from .subsets import SubsetSpec

__all__ = [
    "FPChain",
    "StructureWitness",
    "ChainSearchResult",
    "fs_set",
    "fp_products",
    "fp_set",
    "fs_meets_multiples",
    "is_syndetic_window",
    "is_thick_window",
    "is_pws_window",
    "find_shift_avoiding",
    "extract_fpi_from_thick",
    "fp_chain_search",
    "verify_fp_containment",
    "shifted_fs_search",
    "dilate_left",
]

FS_BUDGET = 30
FP_BUDGET = 16
FP_TWO_SIDED_BUDGET = 10  # 3^m two-sided products; keep enumeration desk-sized


@dataclass(frozen=True)
class FPChain:
    """An ordered generator list g_1, ..., g_m in a fixed group."""

    group: CountableGroup
    generators: tuple

    def __post_init__(self):
        if not self.generators:
            raise DomainError("a product chain needs at least one generator")

    def __len__(self) -> int:
        return len(self.generators)

    def is_escaping(self) -> bool:
        """g_i outside exhaustion(i) for every i (1-based)."""
        return all(
            g not in self.group.exhaustion(i)
            for i, g in enumerate(self.generators, start=1)
        )


@dataclass(frozen=True)
class StructureWitness:
    """Outcome of a structure detector: either certified witness data or a
    scoped negative with the searched bounds."""

    kind: str
    found: bool
    data: dict = field(default_factory=dict)
    searched: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ChainSearchResult:
    kind: str
    found: bool
    generators: tuple
    queries: int
    budget_exhausted: bool = False


def fs_set(xs: Sequence[int]) -> frozenset:
    """All non-empty subset sums of x_1..x_m (multiplicities collapsed)."""
    if not xs:
        raise DomainError("need at least one generator")
    if any(x < 1 for x in xs):
        raise DomainError("finite-sums generators must be positive")
    if len(xs) > FS_BUDGET:
        raise BudgetExceededError(f"fs_set limited to {FS_BUDGET} generators")
    sums = set()
    for x in xs:
        sums |= {s + x for s in sums}
        sums.add(x)
    return frozenset(sums)


def _validate_index_set(alpha: Iterable[int], m: int, label: str) -> tuple:
    out = tuple(sorted(set(alpha)))
    if any(k < 1 or k > m for k in out):
        raise DomainError(f"{label} must be a subset of 1..{m}")
    return out


def inc_product(chain: FPChain, alpha: Iterable[int]):
    """g_{k_1} ... g_{k_m} over k_1 < ... < k_m in alpha; identity if empty."""
    alpha = _validate_index_set(alpha, len(chain), "alpha")
    out = chain.group.identity
    for k in alpha:
        out = chain.group.op(out, chain.generators[k - 1])
    return out


def dec_product(chain: FPChain, beta: Iterable[int]):
    """g_{k_m} ... g_{k_1} over k_1 < ... < k_m in beta; identity if empty."""
    beta = _validate_index_set(beta, len(chain), "beta")
    out = chain.group.identity
    for k in reversed(beta):
        out = chain.group.op(out, chain.generators[k - 1])
    return out


def fp_products(chain: FPChain, alpha: Iterable[int], beta: Iterable[int]):
    """inc_alpha(g) . dec_beta(g) for disjoint alpha, beta, not both empty."""
    a = _validate_index_set(alpha, len(chain), "alpha")
    b = _validate_index_set(beta, len(chain), "beta")
    if set(a) & set(b):
        raise DomainError("alpha and beta must be disjoint")
    if not a and not b:
        raise DomainError("alpha and beta must not both be empty")
    return chain.group.op(inc_product(chain, a), dec_product(chain, b))


def _admissible_pairs(m: int, mode: str):
    """Yield (alpha, beta) index-set pairs in order of total size, then lex.

    FPI fixes beta = {}, FPD fixes alpha = {}; FP ranges over disjoint pairs.
    """
    indices = range(1, m + 1)
    if mode in ("FPI", "FPD"):
        for size in range(1, m + 1):
            for alpha in itertools.combinations(indices, size):
                yield (alpha, ()) if mode == "FPI" else ((), alpha)
        return
    if mode != "FP":
        raise DomainError(f"unknown product mode: {mode!r}")
    pairs = []
    for asize in range(m + 1):
        for alpha in itertools.combinations(indices, asize):
            rest = [k for k in indices if k not in alpha]
            for bsize in range(len(rest) + 1):
                if asize == 0 and bsize == 0:
                    continue
                for beta in itertools.combinations(rest, bsize):
                    pairs.append((alpha, beta))
    pairs.sort(key=lambda ab: (len(ab[0]) + len(ab[1]), ab))
    yield from pairs


def fp_set(chain: FPChain, mode: str = "FP") -> frozenset:
    """Full enumeration of the increasing / decreasing / two-sided finite
    products of the chain.  FP always contains FPI and FPD."""
    m = len(chain)
    limit = FP_TWO_SIDED_BUDGET if mode == "FP" else FP_BUDGET
    if m > limit:
        raise BudgetExceededError(f"fp_set({mode}) limited to {limit} generators")
    return frozenset(
        fp_products(chain, a, b) for a, b in _admissible_pairs(m, mode)
    )


def fs_meets_multiples(xs: Sequence[int], t: int) -> StructureWitness:
    """A non-empty index set alpha with sum over alpha divisible by t.

    Guaranteed to succeed when m >= t by pigeonhole on the prefix sums; for
    m < t an exhaustive subset search may come back empty.
    """
    if t < 1:
        raise DomainError("modulus t must be positive")
    if any(x < 1 for x in xs):
        raise DomainError("generators must be positive")
    m = len(xs)
    searched = {"m": m, "t": t}
    if m >= t:
        prefix = [0]
        for x in xs:
            prefix.append(prefix[-1] + x)
        seen = {}
        for j, p in enumerate(prefix):
            r = p % t
            if r in seen:
                i = seen[r]
                alpha = tuple(range(i + 1, j + 1))
                total = prefix[j] - prefix[i]
                assert total % t == 0
                return StructureWitness(
                    "FS", True, {"alpha": alpha, "sum": total}, searched
                )
            seen[r] = j
        raise AssertionError("pigeonhole cannot fail for m >= t")
    for size in range(1, m + 1):
        for alpha in itertools.combinations(range(1, m + 1), size):
            total = sum(xs[k - 1] for k in alpha)
            if total % t == 0:
                return StructureWitness(
                    "FS", True, {"alpha": alpha, "sum": total}, searched
                )
    return StructureWitness("FS", False, {}, searched)


def _ordered(window: Iterable) -> list:
    """Deterministic scan order: natural sort when sortable, else the
    group's graded enumeration order (largest moved point, then image
    tuple), matching how the canonical enumeration exhausts the group."""
    items = list(window)
    try:
        return sorted(items)
    except TypeError:
        return sorted(items, key=_grade_key)


def _grade_key(g):
    n = g.max_moved()
    return (n, tuple(g(i) for i in range(1, n + 1)))


def dilate_left(e: SubsetSpec, k_set: Iterable) -> SubsetSpec:
    """K.E: membership x -> exists k in K with k^{-1} x in E."""
    group = e.group
    inverses = [group.inv(k) for k in _ordered(k_set)]
    return SubsetSpec(
        name=f"K.{e.name}",
        group=group,
        member=lambda x: any(e.member(group.op(ki, x)) for ki in inverses),
        provenance=f"left dilation of {e.name} by {len(inverses)} elements",
    )


def is_syndetic_window(
    s: SubsetSpec, k_set: Iterable, window: Iterable, domain: Optional[frozenset] = None
) -> bool:
    """Window proxy for K S = G: every w in the window is k.s with s in S.

    When ``domain`` is given, only w whose whole fiber K^{-1} w lies inside
    the domain are quantified over, avoiding edge false-negatives for sets
    known only on a materialization window.
    """
    group = s.group
    inverses = [group.inv(k) for k in _ordered(k_set)]
    for w in _ordered(window):
        fiber = [group.op(ki, w) for ki in inverses]
        if domain is not None and any(x not in domain for x in fiber):
            continue
        if not any(s.member(x) for x in fiber):
            return False
    return True


def is_thick_window(t: SubsetSpec, k_set: Iterable, window: Iterable) -> StructureWitness:
    """Search for a translate g in the window with K g inside T."""
    group = t.group
    ks = _ordered(k_set)
    searched = {"K_size": len(ks), "window_size": len(list(window))}
    for g in _ordered(window):
        if all(t.member(group.op(k, g)) for k in ks):
            return StructureWitness("thick", True, {"g": g}, searched)
    return StructureWitness("thick", False, {}, searched)


def is_pws_window(
    p: SubsetSpec, k_set: Iterable, k_probe: Iterable, window: Iterable
) -> StructureWitness:
    """Piecewise-syndetic proxy: is K.P thick at scale (K', window)?"""
    inner = is_thick_window(dilate_left(p, k_set), k_probe, window)
    searched = dict(inner.searched)
    searched["dilation_size"] = len(list(k_set))
    return StructureWitness("pws", inner.found, dict(inner.data), searched)


def find_shift_avoiding(
    t: SubsetSpec, k_set: Iterable, window: Iterable
) -> StructureWitness:
    """A translate g outside K itself with K g inside T, searched over the
    window; not-found is inconclusive."""
    group = t.group
    ks = _ordered(k_set)
    kset = set(ks)
    searched = {"K_size": len(ks), "window_size": len(list(window))}
    for g in _ordered(window):
        if g in kset:
            continue
        if all(t.member(group.op(k, g)) for k in ks):
            return StructureWitness("thick", True, {"g": g}, searched)
    return StructureWitness("thick", False, {}, searched)


class _QueryCounter:
    __slots__ = ("spec", "count", "budget")

    def __init__(self, spec: SubsetSpec, budget: Optional[int]):
        self.spec = spec
        self.count = 0
        self.budget = budget

    def __call__(self, x) -> bool:
        if self.budget is not None and self.count >= self.budget:
            raise BudgetExceededError("membership query budget exhausted", self.count)
        self.count += 1
        return self.spec.member(x)


def extract_fpi_from_thick(
    t: SubsetSpec,
    m: int,
    group: CountableGroup,
    window: Iterable,
    budget: Optional[int] = None,
) -> ChainSearchResult:
    """Greedy escaping chain with all increasing products inside T.

    Step n+1 scans the window in deterministic order for g outside
    exhaustion(n+1) with (H ∪ {id}).g inside T, where H is the set of
    increasing products found so far.
    """
    query = _QueryCounter(t, budget)
    candidates = _ordered(window)
    gens: list = []
    products: list = [group.identity]  # H ∪ {id}
    try:
        for step in range(1, m + 1):
            escape = group.exhaustion(step)
            chosen = None
            for g in candidates:
                if g in escape:
                    continue
                if all(query(group.op(p, g)) for p in products):
                    chosen = g
                    break
            if chosen is None:
                return ChainSearchResult("FPI", False, tuple(gens), query.count)
            gens.append(chosen)
            products = products + [group.op(p, chosen) for p in products]
    except BudgetExceededError:
        return ChainSearchResult("FPI", False, tuple(gens), query.count, True)
    return ChainSearchResult("FPI", True, tuple(gens), query.count)


def _new_products(group, mode: str, pairs, g):
    """Products a candidate generator must keep inside E, given the (inc,
    dec) factor pairs accumulated over the current chain.  Lazy, so a
    failing early product skips the remaining compositions."""
    ident = group.identity
    if mode in ("FPI", "FPD"):
        for p in pairs:
            if p == ident:
                yield g
            elif mode == "FPI":
                yield group.op(p, g)
            else:
                yield group.op(g, p)
        return
    for left, right in pairs:
        if left == ident and right == ident:
            yield g
        else:
            yield group.op(group.op(left, g), right)


def fp_chain_search(
    e: SubsetSpec,
    m: int,
    group: CountableGroup,
    window: Iterable,
    budget: Optional[int] = None,
    mode: str = "FP",
    escaping: bool = True,
) -> ChainSearchResult:
    """Backtracking search for a chain whose product set lies inside E.

    Candidates are scanned in deterministic order; the budget counts
    membership queries against E.  A chain is accepted only if every
    admissible product is in E (maintained incrementally: the recursion
    keeps, per partial chain, the factor pairs each new generator must be
    inserted into).  Not-found within the budget is inconclusive.
    """
    if mode not in ("FPI", "FPD", "FP"):
        raise DomainError(f"unknown product mode: {mode!r}")
    query = _QueryCounter(e, budget)
    candidates = _ordered(window)
    identity = group.identity

    # factor context: FPI keeps inc products (incl. id) to multiply on the
    # left of g; FPD the mirror; FP keeps (inc, dec) pairs with the new
    # generator slotted in the middle.
    initial = [(identity, identity)] if mode == "FP" else [identity]

    def extend(pairs, g):
        if mode == "FPI":
            return pairs + [group.op(p, g) for p in pairs]
        if mode == "FPD":
            return pairs + [group.op(g, p) for p in pairs]
        out = list(pairs)
        for l, r in pairs:
            out.append((group.op(l, g), r))
            out.append((l, group.op(g, r)))
        return out

    def dfs(gens: list, pairs) -> Optional[tuple]:
        depth = len(gens) + 1
        escape = group.exhaustion(depth) if escaping else ()
        for g in candidates:
            if g in escape:
                continue
            if not all(query(p) for p in _new_products(group, mode, pairs, g)):
                continue
            gens.append(g)
            if len(gens) == m:
                return tuple(gens)
            found = dfs(gens, extend(pairs, g))
            if found is not None:
                return found
            gens.pop()
        return None

    try:
        found = dfs([], initial)
    except BudgetExceededError:
        return ChainSearchResult(mode, False, (), query.count, True)
    if found is None:
        return ChainSearchResult(mode, False, (), query.count)
    return ChainSearchResult(mode, True, found, query.count)


def verify_fp_containment(chain: FPChain, e: SubsetSpec, mode: str = "FP"):
    """Exhaustively check every admissible product of the chain against E.

    Returns (True, None) or (False, (alpha, beta)) for the first violation
    in size-then-lex order.
    """
    m = len(chain)
    if m > FP_BUDGET:
        raise BudgetExceededError(f"verification limited to {FP_BUDGET} generators")
    for alpha, beta in _admissible_pairs(m, mode):
        if not e.member(fp_products(chain, alpha, beta)):
            return False, (alpha, beta)
    return True, None


def shifted_fs_search(
    e: SubsetSpec,
    m: int,
    generator_bound: int,
    shift_bound: int,
    budget: Optional[int] = None,
) -> StructureWitness:
    """Exhaustive search for t in [-shift_bound, shift_bound] and
    1 <= x_1 <= ... <= x_m <= generator_bound with FS(x) + t inside E.

    Integer backend only.  Returns the witness with lexicographically
    least x and, for that x, the valid shift closest to zero; or an
    exhaustive-negative certificate carrying the exact searched bounds.
    """
    if m < 1 or generator_bound < 1 or shift_bound < 0:
        raise DomainError("bounds must be positive (shift bound non-negative)")
    searched = {
        "m": m,
        "generator_bound": generator_bound,
        "shift_bound": shift_bound,
        "exhaustive": True,
    }
    lo = 1 - shift_bound
    hi = m * generator_bound + shift_bound
    mask = np.fromiter(
        (e.member(v) for v in range(lo, hi + 1)), dtype=bool, count=hi - lo + 1
    )
    width = 2 * shift_bound + 1

    def slice_for(s: int) -> np.ndarray:
        # valid shifts t (as a length-width mask over t = -sb..sb) for sum s
        start = s - shift_bound - lo
        return mask[start : start + width]

    nodes = 0

    def dfs(next_min: int, xs: list, sums: list, valid: np.ndarray):
        nonlocal nodes
        for x in range(next_min, generator_bound + 1):
            nodes += 1
            if budget is not None and nodes > budget:
                raise BudgetExceededError(
                    "tuple budget exhausted during shifted-FS search", nodes
                )
            new_sums = [s + x for s in sums] + [x]
            v = valid
            for s in new_sums:
                v = v & slice_for(s)
                if not v.any():
                    v = None
                    break
            if v is None:
                continue
            xs.append(x)
            if len(xs) == m:
                t = min(
                    (int(i) - shift_bound for i in np.flatnonzero(v)),
                    key=lambda t: (abs(t), t),
                )
                return {"t": t, "x": tuple(xs), "sums": sorted(set(sums + new_sums))}
            hit = dfs(x, xs, sums + new_sums, v)
            if hit is not None:
                return hit
            xs.pop()
        return None

    all_t = np.ones(width, dtype=bool)
    witness = dfs(1, [], [], all_t)
    if witness is None:
        return StructureWitness("FS", False, {}, searched)
    return StructureWitness("FS", True, witness, searched)
