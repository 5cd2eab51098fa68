"""Tests for the exact-arithmetic and combinatorial primitives."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from coinstop.exact import (
    DomainError,
    Polynomial,
    binomial,
    catalan,
    cn,
    stirling2,
    to_decimal,
)
from oracles import partition_count, pascal_binomial, segner_catalan


class TestBinomial:
    def test_small_value(self):
        assert binomial(4, 2) == 6

    def test_out_of_range_is_zero(self):
        assert binomial(5, -1) == 0
        assert binomial(5, 6) == 0

    def test_negative_n_rejected(self):
        with pytest.raises(DomainError):
            binomial(-1, 0)

    def test_large_value_matches_pascal(self):
        value = binomial(200, 100)
        assert value == pascal_binomial(200, 100)
        assert len(str(value)) == 59  # ~2^200/sqrt(100 pi), a 59-digit integer

    def test_pascal_identity_exhaustive(self):
        for n in range(1, 61):
            for k in range(n + 1):
                assert binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k)


class TestCatalan:
    def test_examples(self):
        assert catalan(0) == 1
        assert catalan(3) == 5
        assert catalan(10) == 16796

    def test_matches_segner_recurrence(self):
        assert [catalan(j) for j in range(13)] == segner_catalan(12)

    def test_negative_rejected(self):
        with pytest.raises(DomainError):
            catalan(-1)


class TestStirling2:
    def test_examples(self):
        assert stirling2(3, 2) == 3
        assert stirling2(5, 5) == 1
        for r in range(1, 10):
            assert stirling2(r, 0) == 0

    def test_matches_partition_enumeration(self):
        for r in range(7):
            for i in range(r + 1):
                assert stirling2(r, i) == partition_count(r, i)

    def test_falling_factorial_identity(self):
        # sum_i S(r, i) x(x-1)...(x-i+1) == x^r
        for r in range(13):
            for x in range(1, 7):
                total = sum(
                    stirling2(r, i) * math.perm(x, i) for i in range(r + 1)
                )
                assert total == x**r

    def test_negative_rejected(self):
        with pytest.raises(DomainError):
            stirling2(-1, 0)


class TestCn:
    def test_examples(self):
        assert cn(1) == Fraction(1, 2)
        assert cn(2) == Fraction(3, 4)
        assert cn(5) == Fraction(315, 512)

    def test_direct_formula(self):
        for n in range(1, 30):
            assert cn(n) == Fraction(n * math.comb(2 * n, n), 4**n)


@given(
    a=st.integers(-10**6, 10**6),
    b=st.integers(1, 10**6),
    c=st.integers(-10**6, 10**6),
    d=st.integers(1, 10**6),
)
def test_rational_roundtrip(a, b, c, d):
    x = Fraction(a, b)
    y = Fraction(c, d)
    assert (x + y) - y == x
    assert x.denominator > 0
    assert math.gcd(x.numerator, x.denominator) == 1


def test_rational_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        Fraction(1, 2) / Fraction(0)


class TestToDecimal:
    def test_repeating_value(self):
        assert to_decimal(Fraction(1, 3)) == "0.3333333333"

    def test_exact_short_value(self):
        assert to_decimal(Fraction(5, 2)) == "2.5"
        assert to_decimal(Fraction(200)) == "200"

    def test_round_half_even(self):
        assert to_decimal(Fraction(25, 10), 1) == "2"
        assert to_decimal(Fraction(35, 10), 1) == "4"

    def test_trailing_zero_kept_in_significand(self):
        # 10 significant digits of a value whose 10th digit is 0
        assert to_decimal(Fraction(146722992, 10**5) + Fraction(1, 10**13)) == "1467.229920"

    def test_bad_digits(self):
        with pytest.raises(DomainError):
            to_decimal(Fraction(1), 0)


class TestPolynomial:
    def test_trims_trailing_zeros(self):
        poly = Polynomial([1, 2, 0, 0])
        assert poly.coefficients == (Fraction(1), Fraction(2))
        assert poly.degree == 1

    def test_zero_polynomial_degree(self):
        assert Polynomial([]).degree == -1
        assert Polynomial([0, 0]).degree == -1

    def test_coefficient_out_of_range(self):
        poly = Polynomial([Fraction(1, 2)])
        assert poly.coefficient(5) == 0

    def test_add_and_mul(self):
        a = Polynomial([1, 1])  # 1 + x
        b = Polynomial([-1, 1])  # -1 + x
        assert a + b == Polynomial([0, 2])
        assert a * b == Polynomial([-1, 0, 1])
        assert 2 * a == Polynomial([2, 2])

    def test_evaluate(self):
        poly = Polynomial([3, -3, 1])
        assert poly.evaluate(Fraction(1, 2)) == Fraction(7, 4)

    def test_equality_after_trim(self):
        assert Polynomial([1, 2, 0]) == Polynomial([1, 2])
