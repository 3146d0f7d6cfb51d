"""Parameter reduction and problem assembly."""

import pytest

from aimsolve import (
    ExtReal,
    KappaRangeError,
    PivotError,
    PotentialParams,
    ReducedParams,
    ScalingError,
    energy_to_epsilon,
    epsilon_to_energy,
    make_setup,
    reduce_params,
)


def params(A=0, B=1, C=1, kappa=2, m=1, hbar=1, bits=192):
    return PotentialParams.create(A=A, B=B, C=C, kappa=kappa, m=m, hbar=hbar,
                                  precision_bits=bits)


class TestReduce:
    def test_spiked_oscillator_reduction(self):
        # oracle: direct evaluation of the scaling formulas with
        # A=0, B=1, C=1, kappa=2, m=hbar=1
        red = reduce_params(params(), 0)
        assert float(red.r0) == 0.5
        assert red.a_tilde == 0
        assert red.l_prime == 0
        assert float(red.lambda_big) == 0.5
        expect_gamma = (2 * ExtReal(1, 192) * ExtReal("0.5", 192) ** 4).sqrt()
        assert abs(float(red.gamma - expect_gamma)) < 1e-55
        assert abs(float(red.gamma) - 0.35355339059327373) < 1e-15

    def test_zero_inverse_square_collapses_l_prime(self):
        red = reduce_params(params(A=0, B=3, C=0.7, kappa=1), 3)
        assert red.l_prime == 3

    def test_unit_a_tilde_effective_momentum(self):
        # oracle: l' = -1/2 + sqrt(1/4 + 1) for l=0, a_tilde=1
        red = ReducedParams.from_dimensionless(1, 1, 0)
        expect = ExtReal("-0.5", 192) + ExtReal("1.25", 192).sqrt()
        assert abs(float(red.l_prime - expect)) < 1e-55
        assert abs(float(red.l_prime) - 0.6180339887498949) < 1e-15
        assert abs(float(red.lambda_big) - 1.7360679774997896) < 1e-15

    def test_b_zero_scaling_rejected(self):
        with pytest.raises(ScalingError):
            reduce_params(params(B=0), 0)

    def test_negative_l_rejected(self):
        with pytest.raises(ValueError):
            reduce_params(params(), -1)


class TestSetup:
    def test_beta_one_kills_u6_coefficient(self):
        red = ReducedParams.from_dimensionless(1, "0.7", 0)
        setup = make_setup(red, 2, "1")
        s0 = setup.s0("0.3")
        assert s0.coefficient(6) == 0
        assert s0.max_exp == 2

    def test_pivot_value(self):
        # oracle: sqrt(sqrt((Lambda+1)/(2 beta gamma))), a different
        # composition than the implementation's fourth root
        red = ReducedParams.from_dimensionless(1, 1, 0)
        setup = make_setup(red, 1, "0.5")
        expect = ((red.lambda_big + 1) / (2 * ExtReal("0.5") * red.gamma)).sqrt().sqrt()
        assert abs(float(setup.u0 - expect)) < 1e-55
        assert abs(float(setup.u0) - 1.2861206780400545) < 1e-14

    def test_s0_quadratic_coefficient(self):
        # oracle: 4*beta*gamma*Lambda + 10*beta*gamma at eps=0
        red = ReducedParams.from_dimensionless(1, 1, 0)
        setup = make_setup(red, 1, "0.5")
        coeff = setup.s0(0).coefficient(2)
        expect = 2 * red.lambda_big + 5
        assert abs(float(coeff - expect)) < 1e-55
        assert abs(float(coeff) - 8.472135954999579) < 1e-14

    def test_pivot_is_lambda0_root(self):
        for gamma, beta, l in [("0.1", "1", 0), ("3", "0.25", 1), ("10", "2", 2)]:
            red = ReducedParams.from_dimensionless("0.5", gamma, l)
            setup = make_setup(red, 2, beta)
            val = setup.lambda0().evaluate(setup.u0)
            scale = abs(float(setup.lambda0().coefficient(3))) + 1
            assert abs(float(val)) < 1e-50 * scale

    def test_epsilon_linearity_of_s0(self):
        red = ReducedParams.from_dimensionless(1, 1, 0)
        for kappa, beta in [(1, "0.5"), (2, "1"), (2, "0.3")]:
            setup = make_setup(red, kappa, beta)
            d = setup.s0("1.25") - setup.s0("0.75")
            # difference is exactly -4*(eps1-eps2)*u^2
            assert d.terms().keys() == {2}
            assert d.coefficient(2) == -2

    def test_gamma_zero_directs_to_closed_form(self):
        red = ReducedParams.from_dimensionless(1, 0, 0)
        with pytest.raises(PivotError):
            make_setup(red, 1)

    def test_closed_form_kappa_rejected(self):
        red = ReducedParams.from_dimensionless(1, 1, 0)
        for kappa in (0, -1, -2):
            with pytest.raises(KappaRangeError):
                make_setup(red, kappa)

    def test_default_betas(self):
        red = ReducedParams.from_dimensionless(1, 1, 0)
        assert float(make_setup(red, 1).beta) == 0.5
        assert float(make_setup(red, 2).beta) == 1.0

    def test_reduced_universality(self):
        """Distinct physical inputs with equal (a_tilde, gamma) give the
        same setup bitwise."""
        p1 = params(A=0.5, B=1, C=8, kappa=2, m=1, hbar=1)
        two = ExtReal(2, 192)
        p2 = PotentialParams.create(A=1, B=2, C=16, kappa=2, m=1,
                                    hbar=two.sqrt(), precision_bits=192)
        r1 = reduce_params(p1, 0)
        r2 = reduce_params(p2, 0)
        assert r1.a_tilde == r2.a_tilde == 1
        assert r1.gamma == r2.gamma == 1
        s1 = make_setup(r1, 2, "1")
        s2 = make_setup(r2, 2, "1")
        assert s1.u0 == s2.u0
        assert s1.lambda0().terms() == s2.lambda0().terms()
        assert s1.s0("0.25").terms() == s2.s0("0.25").terms()


class TestPhysicalMapping:
    def test_reference_row(self):
        e = epsilon_to_energy(ExtReal("0.29688563"), params())
        assert abs(float(e) - 0.59377126) < 1e-15

    def test_zero_maps_to_zero(self):
        assert epsilon_to_energy(0, params()) == 0

    def test_hydrogen_ground_state_scaling(self):
        e = epsilon_to_energy(ExtReal("-0.25"), params(C=0, kappa=0))
        assert e == -0.5

    def test_roundtrip(self):
        p = params(B=3, m=2, hbar=0.5)
        eps = ExtReal("0.8125", 192)
        assert energy_to_epsilon(epsilon_to_energy(eps, p), p) == eps

    def test_requires_positive_b(self):
        with pytest.raises(ScalingError):
            epsilon_to_energy(1, params(B=0))
