"""Testes para a aritmética exata em ℚ e ℚ(√d)."""

from fractions import Fraction

import mpmath
import numpy as np
import pytest

from recimap.exceptions import FieldMismatchError, ScalarParseError
from recimap.numeric import (
    ONE,
    ZERO,
    Comparison,
    Scalar,
    common_field,
    compare,
    format_scalar,
    is_rational,
    is_squarefree,
    parse_scalar,
)

SQRT2 = Scalar(0, 1, 2)


class TestParseScalar:
    def test_rational(self):
        assert parse_scalar("1/2") == Fraction(1, 2)
        assert parse_scalar("-3") == -3

    def test_quadratic(self):
        x = parse_scalar("0+1/2*sqrt(2)")
        assert (x.a, x.b, x.d) == (0, Fraction(1, 2), 2)

    def test_negative_irrational_part(self):
        x = parse_scalar("7/12-1/4*sqrt(2)")
        assert x.a == Fraction(7, 12)
        assert x.b == Fraction(-1, 4)

    def test_whitespace_is_tolerated(self):
        assert parse_scalar(" 1 + 1 * sqrt( 3 ) ") == Scalar(1, 1, 3)

    def test_zero_irrational_part_is_rational(self):
        x = parse_scalar("1/3+0*sqrt(5)")
        assert x.is_rational
        assert x.d == 0

    @pytest.mark.parametrize(
        "text", ["abc", "1/", "sqrt(2)", "1+sqrt(2)", "", "1.5", "1+-1/2*sqrt(2)", "1--1/2*sqrt(2)"]
    )
    def test_malformed(self, text):
        with pytest.raises(ScalarParseError):
            parse_scalar(text)

    def test_zero_denominator(self):
        with pytest.raises(ScalarParseError):
            parse_scalar("1/0")

    @pytest.mark.parametrize("text", ["1+2*sqrt(4)", "1+1*sqrt(1)", "0+1*sqrt(12)"])
    def test_radicand_must_be_squarefree(self, text):
        with pytest.raises(ScalarParseError):
            parse_scalar(text)


class TestFormatScalar:
    def test_rational(self):
        assert format_scalar(Scalar(Fraction(2, 9))) == "2/9"
        assert format_scalar(ONE) == "1"

    def test_quadratic_keeps_zero_rational_part(self):
        assert format_scalar(Scalar(0, Fraction(1, 2), 2)) == "0+1/2*sqrt(2)"

    def test_negative_coefficient(self):
        assert format_scalar(Scalar(1, -1, 2)) == "1-1*sqrt(2)"

    def test_text_form_parses_back(self):
        x = Scalar(Fraction(-3, 8), Fraction(3, 4), 2)
        assert parse_scalar(format_scalar(x)) == x


class TestArithmetic:
    def test_conjugate_product_is_rational(self):
        assert (1 + SQRT2) * (1 - SQRT2) == -1

    def test_inverse(self):
        assert (1 + SQRT2).inverse() == SQRT2 - 1

    def test_division(self):
        assert (2 + 2 * SQRT2) / (1 + SQRT2) == 2

    def test_power(self):
        assert SQRT2**2 == 2
        assert is_rational(SQRT2**2)
        assert Scalar(2) ** -3 == Fraction(1, 8)
        assert SQRT2**0 == ONE

    def test_mixing_with_fraction_and_int(self):
        assert Fraction(1, 2) + Scalar(Fraction(1, 3)) == Fraction(5, 6)
        assert 1 - Scalar(Fraction(1, 3)) == Fraction(2, 3)
        assert 3 * Scalar(Fraction(1, 3)) == ONE

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            ZERO.inverse()
        with pytest.raises(ZeroDivisionError):
            SQRT2 / 0

    def test_field_mismatch(self):
        with pytest.raises(FieldMismatchError):
            SQRT2 + Scalar(0, 1, 3)

    def test_rationals_promote_into_any_field(self):
        x = Scalar(Fraction(1, 3)) + Scalar(0, 1, 5)
        assert x.d == 5

    def test_invalid_constructor(self):
        with pytest.raises(ValueError):
            Scalar(1, 1, 4)
        with pytest.raises(ValueError):
            Scalar(1, 1, 0)


class TestCompare:
    def test_sign_of_close_irrational(self):
        # 3 − 2√2 ≈ 0.1716
        assert Scalar(3, -2, 2).sign() == 1
        assert Scalar(-3, 2, 2).sign() == -1

    def test_compare(self):
        assert compare(1 + SQRT2, 2) == Comparison.GT
        assert compare(Fraction(3, 2), SQRT2) == Comparison.GT
        assert compare(SQRT2, SQRT2) == Comparison.EQ
        assert compare(SQRT2 - 1, Fraction(1, 2)) == Comparison.LT

    def test_ordering_operators(self):
        assert SQRT2 < Fraction(3, 2)
        assert SQRT2 >= Fraction(7, 5)
        assert max(SQRT2, Scalar(Fraction(3, 2))) == Fraction(3, 2)

    def test_hash_matches_fraction(self):
        assert hash(Scalar(Fraction(1, 3))) == hash(Fraction(1, 3))
        assert len({Scalar(Fraction(1, 2)), Fraction(1, 2)}) == 1


class TestHelpers:
    def test_is_squarefree(self):
        assert is_squarefree(2)
        assert is_squarefree(30)
        assert not is_squarefree(1)
        assert not is_squarefree(18)

    def test_common_field(self):
        assert common_field([Fraction(1, 2), SQRT2]) == 2
        assert common_field([1, 2]) == 0

    def test_common_field_mismatch(self):
        with pytest.raises(FieldMismatchError):
            common_field([SQRT2, Scalar(0, 1, 3)])

    def test_to_mpf(self):
        with mpmath.workprec(128):
            assert abs(SQRT2.to_mpf() - mpmath.sqrt(2)) < mpmath.mpf(2) ** -120

    def test_float(self):
        assert float(SQRT2) == pytest.approx(2**0.5)


def _random_scalar(rng: np.random.Generator, d: int = 2) -> Scalar:
    a = Fraction(int(rng.integers(-50, 51)), int(rng.integers(1, 20)))
    b = Fraction(int(rng.integers(-50, 51)), int(rng.integers(1, 20)))
    return Scalar(a, b, d)


class TestFieldProperties:
    def test_field_axioms(self):
        rng = np.random.default_rng(20)
        for _ in range(500):
            x, y, z = (_random_scalar(rng) for _ in range(3))
            assert (x + y) + z == x + (y + z)
            assert (x * y) * z == x * (y * z)
            assert x * (y + z) == x * y + x * z
            assert x + y == y + x
            assert x * y == y * x
            assert x + (-x) == ZERO
            if x:
                assert x * x.inverse() == ONE

    def test_order_is_total_transitive_and_translation_invariant(self):
        rng = np.random.default_rng(21)
        for _ in range(500):
            x, y, z = (_random_scalar(rng) for _ in range(3))
            assert sum((x < y, x == y, y < x)) == 1
            if x < y and y < z:
                assert x < z
            if x < y:
                assert x + z < y + z

    def test_compare_agrees_with_high_precision(self):
        rng = np.random.default_rng(22)
        expected = {-1: Comparison.LT, 0: Comparison.EQ, 1: Comparison.GT}
        with mpmath.workprec(128):
            for _ in range(10_000):
                x, y = _random_scalar(rng), _random_scalar(rng)
                difference = x.to_mpf(128) - y.to_mpf(128)
                sign = 0 if x == y else (1 if difference > 0 else -1)
                assert compare(x, y) == expected[sign]
