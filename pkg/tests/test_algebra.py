"""Scalar and Laurent-polynomial algebra."""

import pickle

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aimsolve import DomainError, ExtReal, LaurentPoly, PrecisionError


def poly(terms, bits=None):
    return LaurentPoly.from_terms(terms, bits)


class TestExtReal:
    def test_minimum_precision_enforced(self):
        with pytest.raises(ValueError):
            ExtReal(1, 32)

    def test_precision_promotion_to_max(self):
        a = ExtReal(1, 64)
        b = ExtReal(1, 256)
        assert (a + b).precision_bits == 256
        assert (b * a).precision_bits == 256
        assert (a / b).precision_bits == 256

    def test_string_construction_is_high_precision(self):
        x = ExtReal("0.1", 192)
        # 0.1 at 192 bits differs from the 53-bit double beyond 1e-17
        assert abs(float(x - ExtReal(0.1, 192))) < 1e-16
        assert x != ExtReal(0.1, 192)

    def test_non_finite_inputs_rejected(self):
        with pytest.raises(PrecisionError):
            ExtReal(float("inf"))
        with pytest.raises(PrecisionError):
            ExtReal(float("nan"))

    def test_overflow_is_an_error_not_saturation(self):
        big = ExtReal(2, 64) ** (2**29)
        with pytest.raises(PrecisionError):
            (big * big) * (big * big)
        with pytest.raises(PrecisionError):
            big ** (2**32)

    def test_division_by_zero_raises(self):
        with pytest.raises(PrecisionError):
            ExtReal(1) / ExtReal(0)

    def test_comparisons_and_mixed_arithmetic(self):
        x = ExtReal("1.5")
        assert x > 1 and x < 2 and x == 1.5
        assert float(2 * x - 1) == 2.0
        assert float(1 / ExtReal(4)) == 0.25

    def test_sqrt_and_roots(self):
        assert ExtReal(16).sqrt() == 4
        assert ExtReal(81).nth_root(4) == 3
        with pytest.raises(DomainError):
            ExtReal(-1).sqrt()

    def test_pickle_roundtrip_exact(self):
        x = ExtReal("2.360712391", 192)
        y = pickle.loads(pickle.dumps(x))
        assert y == x and y.precision_bits == 192


class TestLaurentPoly:
    def test_add_merges_exponents(self):
        # (u + u^-1) + 2u = 3u + u^-1
        got = poly({1: 1, -1: 1}) + poly({1: 2})
        assert got.terms() == poly({1: 3, -1: 1}).terms()

    def test_add_identity(self):
        p = poly({3: 2, 0: -1})
        assert (p + LaurentPoly.zero()).terms() == p.terms()

    def test_add_cancels_to_canonical_zero(self):
        got = poly({3: 1, 1: -1}) + poly({1: 1, 3: -1})
        assert got.is_zero
        assert got.min_exp == 0 and got.coeffs == ()

    def test_mul_difference_of_squares(self):
        got = poly({1: 1, 0: 1}) * poly({1: 1, 0: -1})
        assert got.terms() == poly({2: 1, 0: -1}).terms()

    def test_mul_exponent_addition(self):
        got = poly({-1: 1}) * poly({3: 1})
        assert got.min_exp == 2 and got.max_exp == 2

    def test_mul_matches_pointwise_evaluation(self):
        # oracle: direct pointwise multiplication at the sample point
        import random

        rng = random.Random(42)
        u = ExtReal("1.5", 192)
        for _ in range(50):
            p = poly({e: rng.randint(-9, 9) for e in range(-3, 7)}, 192)
            q = poly({e: rng.randint(-9, 9) for e in range(-3, 7)}, 192)
            lhs = (p * q).evaluate(u)
            rhs = p.evaluate(u) * q.evaluate(u)
            tol = 10 ** (-0.28 * 192)
            denom = max(abs(float(rhs)), 1e-30)
            assert abs(float(lhs - rhs)) / denom < tol

    def test_differentiate_power_rule(self):
        assert poly({3: 1}).differentiate().terms() == poly({2: 3}).terms()

    def test_differentiate_constant_vanishes(self):
        assert poly({0: 5}).differentiate().is_zero

    def test_differentiate_negative_power(self):
        got = poly({-1: 1}).differentiate()
        assert got.terms() == poly({-2: -1}).terms()

    def test_evaluate_at_unity(self):
        assert poly({2: 1, 0: 2}).evaluate(ExtReal(1)) == 3

    def test_evaluate_reciprocal(self):
        assert poly({-1: 1}).evaluate(ExtReal(2)) == 0.5

    def test_evaluate_mixed_exponents(self):
        # oracle: term-by-term summation,
        # 2*(1.5)^3 - 3*(1.5) + (1.5)^-1 = 6.75 - 4.5 + 2/3 = 35/12
        got = poly({3: 2, 1: -3, -1: 1}).evaluate(ExtReal("1.5"))
        expect = ExtReal(35, 192) / 12
        assert abs(float(got - expect)) < 1e-50

    def test_evaluate_rejects_invalid_pivot(self):
        p = poly({-1: 1, 2: 1})
        with pytest.raises(DomainError):
            p.evaluate(ExtReal(0))
        with pytest.raises(DomainError):
            p.evaluate(ExtReal(-2))
        # pure non-negative exponents evaluate anywhere
        assert poly({2: 1}).evaluate(ExtReal(-2)) == 4

    def test_zero_polynomial_evaluates_to_exact_zero(self):
        assert LaurentPoly.zero().evaluate(ExtReal("1.7")) == 0

    def test_normalization_keeps_interior_zeros(self):
        p = LaurentPoly([1, 0, 2], min_exp=-1)
        assert p.min_exp == -1 and p.max_exp == 1
        assert p.coefficient(0) == 0

    def test_scalar_multiplication(self):
        got = poly({2: 3, -1: 1}) * ExtReal(2)
        assert got.terms() == poly({2: 6, -1: 2}).terms()


# -- property suites ---------------------------------------------------------

coeffs = st.integers(min_value=-50, max_value=50)
exponents = st.integers(min_value=-4, max_value=8)


def poly_strategy():
    return st.dictionaries(exponents, coeffs, min_size=0, max_size=8).map(
        lambda d: LaurentPoly.from_terms(d, 192)
    )


@settings(max_examples=200, deadline=None)
@given(poly_strategy(), poly_strategy())
def test_product_rule(f, g):
    lhs = (f * g).differentiate()
    rhs = f.differentiate() * g + f * g.differentiate()
    # integer coefficients make both sides exact in binary arithmetic
    assert lhs.terms() == rhs.terms()


@settings(max_examples=200, deadline=None)
@given(poly_strategy(), poly_strategy(),
       st.floats(min_value=0.25, max_value=4.0, allow_nan=False))
def test_evaluation_homomorphism(f, g, u):
    u0 = ExtReal(u, 192)
    fs = f.evaluate(u0)
    gs = g.evaluate(u0)
    add_diff = float((f + g).evaluate(u0) - (fs + gs))
    mul_diff = float((f * g).evaluate(u0) - fs * gs)
    scale = max(abs(float(fs)) + abs(float(gs)),
                abs(float(fs) * float(gs)), 1.0)
    assert abs(add_diff) <= 1e-45 * scale
    assert abs(mul_diff) <= 1e-45 * scale


@settings(max_examples=200, deadline=None)
@given(poly_strategy(), poly_strategy())
def test_degree_bookkeeping(f, g):
    prod = f * g
    if f.is_zero or g.is_zero:
        assert prod.is_zero
    else:
        assert prod.max_exp == f.max_exp + g.max_exp
        assert prod.min_exp == f.min_exp + g.min_exp


@settings(max_examples=200, deadline=None)
@given(poly_strategy())
def test_canonical_negation(p):
    assert (p + (-p)).is_zero
