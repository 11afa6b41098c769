import pytest
from hypothesis import given, strategies as st

from folnerlab.errors import BudgetExceededError, DomainError
from folnerlab.groups import ALT, Z, parse_cycles
from folnerlab.structures import (
    FPChain,
    dilate_left,
    extract_fpi_from_thick,
    find_shift_avoiding,
    fp_chain_search,
    fp_products,
    fp_set,
    fs_meets_multiples,
    fs_set,
    is_pws_window,
    is_syndetic_window,
    is_thick_window,
    shifted_fs_search,
    verify_fp_containment,
)
from folnerlab.subsets import from_finite, full_set, multiples


class TestFsSet:
    def test_small(self):
        assert fs_set([1, 2]) == {1, 2, 3}
        assert fs_set([2, 2]) == {2, 4}
        assert fs_set([5]) == {5}

    def test_rejects_nonpositive(self):
        with pytest.raises(DomainError):
            fs_set([1, 0])

    def test_budget(self):
        with pytest.raises(BudgetExceededError):
            fs_set([1] * 31)

    @given(st.lists(st.integers(1, 50), min_size=1, max_size=8))
    def test_matches_subset_sums(self, xs):
        expected = set()
        for bits in range(1, 2 ** len(xs)):
            expected.add(sum(x for i, x in enumerate(xs) if bits >> i & 1))
        assert fs_set(xs) == expected


class TestFpProducts:
    def chain(self):
        g = parse_cycles("(1 2 3)")
        h = parse_cycles("(1 4 5)")
        return FPChain(ALT, (g, h))

    def test_inc_dec_orders(self):
        ch = self.chain()
        assert str(fp_products(ch, {1}, {2})) == "(1 4 5 2 3)"
        assert str(fp_products(ch, {2}, {1})) == "(1 2 3 4 5)"
        # increasing: g1 g2; decreasing: g2 g1
        assert str(fp_products(ch, {1, 2}, ())) == "(1 4 5 2 3)"
        assert str(fp_products(ch, (), {1, 2})) == "(1 2 3 4 5)"

    def test_rejects_overlap_and_empty(self):
        ch = self.chain()
        with pytest.raises(DomainError):
            fp_products(ch, {1}, {1})
        with pytest.raises(DomainError):
            fp_products(ch, (), ())

    def test_rejects_out_of_range_index(self):
        with pytest.raises(DomainError):
            fp_products(self.chain(), {3}, ())

    def test_integer_modes_all_coincide(self):
        ch = FPChain(Z, (1, 2, 4))
        expected = {1, 2, 3, 4, 5, 6, 7}
        assert fp_set(ch, "FPI") == expected
        assert fp_set(ch, "FPD") == expected
        assert fp_set(ch, "FP") == expected

    def test_fp_contains_one_sided_sets(self):
        g = parse_cycles("(1 2 3)")
        h = parse_cycles("(1 4 5)")
        k = parse_cycles("(2 6 7)")
        ch = FPChain(ALT, (g, h, k))
        two_sided = fp_set(ch, "FP")
        assert fp_set(ch, "FPI") <= two_sided
        assert fp_set(ch, "FPD") <= two_sided

    def test_fp_set_budget(self):
        with pytest.raises(BudgetExceededError):
            fp_set(FPChain(Z, tuple(range(1, 18))), "FPI")
        with pytest.raises(BudgetExceededError):
            fp_set(FPChain(Z, tuple(range(1, 12))), "FP")

    def test_verify_containment_reports_first_violation(self):
        ch = FPChain(Z, (1, 2))
        ok, bad = verify_fp_containment(ch, from_finite(Z, {1, 2}), "FPI")
        assert not ok
        assert bad == ((1, 2), ())

    def test_verify_containment_ok(self):
        ch = FPChain(Z, (1, 2))
        ok, bad = verify_fp_containment(ch, from_finite(Z, {1, 2, 3}), "FP")
        assert ok and bad is None


class TestFsMeetsMultiples:
    def test_pigeonhole_witness(self):
        w = fs_meets_multiples([1, 1, 1], 3)
        assert w.found
        assert w.data["sum"] % 3 == 0

    def test_exhaustive_small_m(self):
        w = fs_meets_multiples([1, 1], 5)
        assert not w.found

    def test_rejects_bad_input(self):
        with pytest.raises(DomainError):
            fs_meets_multiples([1, -1], 2)
        with pytest.raises(DomainError):
            fs_meets_multiples([1], 0)

    @given(
        st.integers(1, 20).flatmap(
            lambda t: st.tuples(
                st.just(t), st.lists(st.integers(1, 100), min_size=t, max_size=t)
            )
        )
    )
    def test_always_found_when_m_equals_t(self, t_xs):
        t, xs = t_xs
        w = fs_meets_multiples(xs, t)
        assert w.found
        alpha = w.data["alpha"]
        assert alpha == tuple(sorted(set(alpha)))
        assert sum(xs[k - 1] for k in alpha) % t == 0


class TestWindowDetectors:
    def test_evens_syndetic(self):
        assert is_syndetic_window(multiples(Z, 2), [0, 1], range(0, 100))

    def test_odd_k_misses(self):
        assert not is_syndetic_window(multiples(Z, 4), [0, 1], range(0, 100))

    def test_domain_skips_edge_fibers(self):
        s = from_finite(Z, {4, 6, 8})
        dom = frozenset(range(4, 10))
        # 0 and 1 have fibers outside the domain, so they are not quantified
        assert is_syndetic_window(s, [0, 1], range(0, 10), domain=dom)

    def test_thick_witness(self):
        t = from_finite(Z, set(range(10, 20)))
        w = is_thick_window(t, [0, 1, 2], range(0, 30))
        assert w.found and w.data["g"] == 10

    def test_thick_negative(self):
        w = is_thick_window(multiples(Z, 2), [0, 1], range(0, 50))
        assert not w.found

    def test_pws_of_evens(self):
        # {0,1}-dilation of the evens is everything, hence thick
        w = is_pws_window(multiples(Z, 2), [0, 1], [0, 1, 2, 3], range(0, 50))
        assert w.found

    def test_pws_negative_for_sparse_set(self):
        sparse = from_finite(Z, {0, 100})
        w = is_pws_window(sparse, [0, 1], list(range(-4, 5)), range(0, 200))
        assert not w.found

    def test_dilate_left(self):
        kq = dilate_left(from_finite(Z, {10}), [-1, 0, 1])
        assert {9, 10, 11} == {x for x in range(0, 20) if kq.member(x)}

    def test_find_shift_avoiding(self):
        t = from_finite(Z, set(range(0, 40)))
        w = find_shift_avoiding(t, [0, 1, 2], range(0, 50))
        assert w.found and w.data["g"] not in {0, 1, 2}


class TestExtractFpi:
    def test_from_even_thick_set(self):
        t = multiples(Z, 2)
        res = extract_fpi_from_thick(t, 3, Z, range(-200, 201))
        assert res.found
        assert all(g % 2 == 0 for g in res.generators)
        # escaping: generator i lies outside [-i, i]
        for i, g in enumerate(res.generators, start=1):
            assert abs(g) > i
        ch = FPChain(Z, res.generators)
        ok, _ = verify_fp_containment(ch, t, "FPI")
        assert ok

    def test_budget_interrupts(self):
        res = extract_fpi_from_thick(multiples(Z, 2), 3, Z, range(-200, 201), budget=3)
        assert not res.found
        assert res.budget_exhausted
        assert res.queries <= 3

    def test_fails_when_window_has_no_candidate(self):
        res = extract_fpi_from_thick(multiples(Z, 2), 2, Z, range(0, 2))
        assert not res.found


class TestChainSearch:
    def test_full_set_always_found(self):
        res = fp_chain_search(full_set(Z), 3, Z, range(-20, 21), mode="FP")
        assert res.found
        assert len(res.generators) == 3

    def test_empty_set_not_found(self):
        res = fp_chain_search(from_finite(Z, set()), 2, Z, range(-10, 11))
        assert not res.found and not res.budget_exhausted

    def test_escaping_constraint(self):
        res = fp_chain_search(full_set(Z), 3, Z, range(-20, 21), escaping=True)
        for i, g in enumerate(res.generators, start=1):
            assert g not in Z.exhaustion(i)

    def test_found_chain_verifies(self):
        e = multiples(Z, 3)
        res = fp_chain_search(e, 3, Z, range(-30, 31), mode="FPI")
        assert res.found
        ok, _ = verify_fp_containment(FPChain(Z, res.generators), e, "FPI")
        assert ok

    def test_budget_exhaustion_flagged(self):
        e = from_finite(Z, {10 ** 6})  # unreachable products
        res = fp_chain_search(e, 2, Z, range(-50, 51), budget=20)
        assert not res.found and res.budget_exhausted

    def test_bad_mode_rejected(self):
        with pytest.raises(DomainError):
            fp_chain_search(full_set(Z), 2, Z, range(3), mode="XY")


class TestShiftedFsSearch:
    def test_trivial_full_set(self):
        w = shifted_fs_search(full_set(Z), 2, 4, 4)
        assert w.found
        assert w.data["t"] == 0 and w.data["x"] == (1, 1)

    def test_odds_have_shifted_fs(self):
        w = shifted_fs_search(multiples(Z, 2, 1), 2, 2, 1)
        assert w.found
        t, xs = w.data["t"], w.data["x"]
        assert all((sum(xs[: k + 1]) + t) % 2 == 1 for k in range(len(xs)))

    def test_exhaustive_negative(self):
        # {1} cannot absorb the two distinct sums x and 2x
        w = shifted_fs_search(from_finite(Z, {1}), 2, 8, 8)
        assert not w.found
        assert w.searched["exhaustive"]

    def test_witness_is_verified_shift(self):
        e = multiples(Z, 3)
        w = shifted_fs_search(e, 3, 6, 6)
        assert w.found
        for s in w.data["sums"]:
            assert e.member(s + w.data["t"])

    def test_budget(self):
        with pytest.raises(BudgetExceededError):
            shifted_fs_search(from_finite(Z, set()), 4, 64, 16, budget=10)

    def test_rejects_bad_bounds(self):
        with pytest.raises(DomainError):
            shifted_fs_search(full_set(Z), 0, 4, 4)
