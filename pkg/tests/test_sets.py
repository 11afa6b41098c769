from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from folnerlab.errors import BackendMismatchError, DomainError
from folnerlab.folner import interval_sequence
from folnerlab.groups import ALT, Z, parse_cycles
from folnerlab.subsets import (
    complement,
    density_along,
    difference,
    empty_set,
    from_finite,
    full_set,
    intersection,
    materialize,
    multiples,
    rle_decode,
    rle_encode,
    shift_left,
    shift_right,
    symmetric_difference,
    union,
)


class TestBasics:
    def test_from_finite(self):
        e = from_finite(Z, [1, 2, 2, 5])
        assert 2 in e and 3 not in e

    def test_full_and_empty(self):
        assert 123 in full_set(Z)
        assert 123 not in empty_set(Z)

    def test_multiples(self):
        evens = multiples(Z, 2)
        odds = multiples(Z, 2, 1)
        assert 4 in evens and -6 in evens and 3 not in evens
        assert 3 in odds and -3 in odds

    def test_multiples_rejects_bad_modulus(self):
        with pytest.raises(DomainError):
            multiples(Z, 0)

    def test_shift_left_integers(self):
        e = from_finite(Z, {10})
        assert 13 in shift_left(e, 3)
        assert 10 not in shift_left(e, 3)

    def test_shifts_differ_for_permutations(self):
        g = parse_cycles("(1 2 3)")
        h = parse_cycles("(1 4 5)")
        e = from_finite(ALT, {h})
        assert ALT.op(g, h) in shift_left(e, g)
        assert ALT.op(h, g) in shift_right(e, g)
        assert ALT.op(h, g) not in shift_left(e, g)


class TestAlgebra:
    def test_union_intersection(self):
        a = multiples(Z, 2)
        b = multiples(Z, 3)
        assert 6 in intersection(a, b)
        assert 4 in union(a, b) and 9 in union(a, b)
        assert 5 not in union(a, b)

    def test_complement_difference(self):
        a = multiples(Z, 2)
        assert 3 in complement(a)
        assert 4 in difference(a, multiples(Z, 3))
        assert 6 not in difference(a, multiples(Z, 3))

    def test_symmetric_difference(self):
        a = multiples(Z, 2)
        b = multiples(Z, 3)
        s = symmetric_difference(a, b)
        assert 4 in s and 9 in s and 6 not in s

    def test_backend_mismatch(self):
        with pytest.raises(BackendMismatchError):
            union(multiples(Z, 2), full_set(ALT))

    @given(st.sets(st.integers(-20, 20)), st.sets(st.integers(-20, 20)))
    def test_algebra_matches_python_sets(self, xs, ys):
        a, b = from_finite(Z, xs), from_finite(Z, ys)
        window = range(-20, 21)
        assert materialize(union(a, b), window) == frozenset(xs | ys)
        assert materialize(intersection(a, b), window) == frozenset(xs & ys)
        assert materialize(difference(a, b), window) == frozenset(xs - ys)
        assert materialize(symmetric_difference(a, b), window) == frozenset(xs ^ ys)


class TestDensity:
    def test_exact_rows(self):
        report = density_along(multiples(Z, 2), interval_sequence(), [2, 4, 10])
        assert report.rows[0] == (2, 1, 2, Fraction(1, 2))
        assert report.ratio_at(10) == Fraction(1, 2)

    def test_estimates_use_tail(self):
        # early windows over-count; estimates come from the tail half
        e = from_finite(Z, set(range(0, 10)) | {100})
        report = density_along(e, interval_sequence(), [10, 200, 400, 800])
        assert report.upper_estimate < Fraction(1, 10)
        assert report.lower_estimate <= report.upper_estimate

    def test_empty_range_rejected(self):
        with pytest.raises(DomainError):
            density_along(multiples(Z, 2), interval_sequence(), [])

    def test_residue_class_exact(self):
        report = density_along(multiples(Z, 5, 2), interval_sequence(), [5, 50, 500])
        assert all(row[3] == Fraction(1, 5) for row in report.rows)


class TestRle:
    def test_encode(self):
        assert rle_encode([1, 2, 3, 7, 9, 10]) == [[1, 3], [7, 1], [9, 2]]

    def test_decode(self):
        assert rle_decode([[1, 3], [7, 1]]) == [1, 2, 3, 7]

    @given(st.sets(st.integers(-1000, 1000)))
    def test_roundtrip(self, xs):
        assert set(rle_decode(rle_encode(xs))) == xs

    @given(st.sets(st.integers(0, 200)))
    def test_encoding_is_compact(self, xs):
        runs = rle_encode(xs)
        assert len(runs) <= max(1, len(xs))
        starts = [r[0] for r in runs]
        assert starts == sorted(starts)
