"""Potential parameters and their reduction to the iteration-ready form.

The solver targets bound states of the radial potential

    V(r) = A/r**2 − B/r + C*r**kappa,        kappa in {−2, −1, 0, 1, 2}.

For kappa = 1 and 2 the equation is rescaled to dimensionless form with
r0 = hbar**2 / (2 m B) and eps = hbar**2 E / (2 m B**2), the inverse-square
term is absorbed into an effective angular momentum l', and the substitution
rho = u**2 turns the problem into a second-order ODE whose coefficient
functions are Laurent polynomials in u:

    f''(u) = lambda0(u) f'(u) + s0(u; eps) f(u)

with

    lambda0(u) = 2 (2 beta gamma u**3 − (Lambda + 1)/u)
    s0(u; eps) = (4 beta gamma Lambda + 10 beta gamma − 4 eps) u**2
                 − 4 beta**2 gamma**2 u**6 − 4
                 + 4 gamma**2 u**(2 kappa + 2)

where Lambda = 2 l' + 1/2 and beta > 0 is a free constant that tunes the
convergence speed without moving the converged eigenvalue.  The residual
pivot u0 = ((Lambda+1) / (2 beta gamma))**(1/4) is the positive root of
lambda0, i.e. the maximum of the asymptotic profile.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .algebra import DEFAULT_PRECISION_BITS, ExtReal, LaurentPoly
from .errors import KappaRangeError, PivotError, ScalingError

__all__ = [
    "PotentialParams",
    "ReducedParams",
    "ProblemSetup",
    "reduce_params",
    "make_setup",
    "epsilon_to_energy",
    "energy_to_epsilon",
    "default_beta",
]

VALID_KAPPAS = (-2, -1, 0, 1, 2)
ITERATIVE_KAPPAS = (1, 2)


def _ext(x, bits):
    return x if isinstance(x, ExtReal) and x.precision_bits == bits else ExtReal(x, bits)


@dataclass(frozen=True)
class PotentialParams:
    """Physical inputs A, B, C, kappa plus mass and hbar."""

    A: ExtReal
    B: ExtReal
    C: ExtReal
    kappa: int
    m: ExtReal
    hbar: ExtReal

    @classmethod
    def create(cls, A, B, C, kappa, m=1, hbar=1,
               precision_bits: int = DEFAULT_PRECISION_BITS) -> "PotentialParams":
        p = cls(
            A=_ext(A, precision_bits),
            B=_ext(B, precision_bits),
            C=_ext(C, precision_bits),
            kappa=int(kappa),
            m=_ext(m, precision_bits),
            hbar=_ext(hbar, precision_bits),
        )
        if p.kappa not in VALID_KAPPAS:
            raise KappaRangeError(f"kappa must be one of {VALID_KAPPAS}, got {kappa}")
        if p.A < 0:
            raise ValueError("A must be >= 0")
        if p.C < 0:
            raise ValueError("C must be >= 0 (confining branch only)")
        if p.B < 0:
            raise ValueError("B must be >= 0")
        if not p.m > 0:
            raise ValueError("m must be > 0")
        if not p.hbar > 0:
            raise ValueError("hbar must be > 0")
        return p

    @property
    def precision_bits(self) -> int:
        return self.B.precision_bits


@dataclass(frozen=True)
class ReducedParams:
    """Dimensionless parameters of the rescaled radial equation.

    l' = −1/2 + sqrt((l + 1/2)**2 + a_tilde) absorbs the inverse-square
    term; lambda_big = 2 l' + 1/2 is the effective index after the u**2
    substitution.  r0 is kept for mapping back to physical lengths and is
    None when the parameters were supplied directly in reduced form.
    """

    a_tilde: ExtReal
    gamma: ExtReal
    l_prime: ExtReal
    lambda_big: ExtReal
    l: int
    r0: ExtReal | None = None

    @classmethod
    def from_dimensionless(cls, a_tilde, gamma, l: int,
                           precision_bits: int = DEFAULT_PRECISION_BITS) -> "ReducedParams":
        """Build directly from (a_tilde, gamma) without physical inputs.

        This is the entry point for family members where the Coulomb scaling
        breaks down (B = 0) or when reproducing dimensionless reference
        values.
        """
        if l < 0:
            raise ValueError("l must be >= 0")
        at = _ext(a_tilde, precision_bits)
        g = _ext(gamma, precision_bits)
        if at < 0:
            raise ValueError("a_tilde must be >= 0")
        if g < 0:
            raise ValueError("gamma must be >= 0")
        half = ExtReal("0.5", precision_bits)
        lh = ExtReal(l, precision_bits) + half
        l_prime = -half + (lh * lh + at).sqrt()
        lam = 2 * l_prime + half
        return cls(a_tilde=at, gamma=g, l_prime=l_prime, lambda_big=lam, l=l)

    @property
    def precision_bits(self) -> int:
        return self.gamma.precision_bits


def reduce_params(params: PotentialParams, l: int) -> ReducedParams:
    """Map physical parameters to the dimensionless set for a given l.

    r0 = hbar**2/(2 m B), a_tilde = 2 m A / hbar**2 and
    gamma = +sqrt(2 m C r0**(kappa+2) / hbar**2).  Requires B > 0; callers
    with B = 0 must construct ReducedParams.from_dimensionless themselves.
    """
    if l < 0:
        raise ValueError("l must be >= 0")
    if not params.B > 0:
        raise ScalingError(
            "r0 = hbar^2/(2 m B) is undefined at B = 0; supply reduced "
            "parameters (a_tilde, gamma) directly"
        )
    bits = params.precision_bits
    hbar2 = params.hbar * params.hbar
    r0 = hbar2 / (2 * params.m * params.B)
    a_tilde = 2 * params.m * params.A / hbar2
    gamma2 = 2 * params.m * params.C * r0 ** (params.kappa + 2) / hbar2
    gamma = gamma2.sqrt()
    base = ReducedParams.from_dimensionless(a_tilde, gamma, l, bits)
    return ReducedParams(
        a_tilde=base.a_tilde,
        gamma=base.gamma,
        l_prime=base.l_prime,
        lambda_big=base.lambda_big,
        l=l,
        r0=r0,
    )


def default_beta(kappa: int) -> str:
    """Convergence constant giving the fastest settling in benchmarks."""
    return "0.5" if kappa == 1 else "1.0"


@dataclass(frozen=True)
class ProblemSetup:
    """Iteration-ready coefficient functions for kappa = 1 or 2.

    ``lambda0()`` is independent of the eigenvalue candidate; ``s0(eps)``
    carries eps only in its −4*eps*u**2 term.  ``u0`` is the residual pivot,
    the positive root of lambda0.
    """

    kappa: int
    beta: ExtReal
    u0: ExtReal
    reduced: ReducedParams

    @property
    def precision_bits(self) -> int:
        return self.u0.precision_bits

    @cached_property
    def _lambda0(self) -> LaurentPoly:
        bg = self.beta * self.reduced.gamma
        lam1 = self.reduced.lambda_big + 1
        return LaurentPoly.from_terms({3: 4 * bg, -1: -2 * lam1})

    def lambda0(self) -> LaurentPoly:
        return self._lambda0

    def s0(self, eps) -> LaurentPoly:
        """Coefficient function for the eigenvalue candidate eps."""
        bits = self.precision_bits
        e = _ext(eps, bits)
        b = self.beta
        g = self.reduced.gamma
        lam = self.reduced.lambda_big
        bg = b * g
        terms = {
            2: 4 * bg * lam + 10 * bg - 4 * e,
            0: ExtReal(-4, bits),
        }
        g2 = g * g
        if self.kappa == 1:
            terms[6] = -4 * bg * bg
            terms[4] = 4 * g2
        else:
            c6 = 4 * g2 - 4 * bg * bg  # cancels exactly at beta = 1
            if c6 != 0:
                terms[6] = c6
        return LaurentPoly.from_terms(terms, bits)


def make_setup(reduced: ReducedParams, kappa: int, beta=None) -> ProblemSetup:
    """Assemble the u-space problem for kappa in {1, 2}.

    gamma = 0 has no pivot (u0 diverges): that is the C = 0 member of the
    family, which is exactly solvable — use the closed-form module.
    """
    if kappa not in ITERATIVE_KAPPAS:
        raise KappaRangeError(
            f"kappa={kappa} has a closed-form solution; the iterative setup "
            "applies to kappa in {1, 2} only"
        )
    bits = reduced.precision_bits
    if not reduced.gamma > 0:
        raise PivotError(
            "gamma = 0 leaves the pivot u0 undefined (C = 0 is exactly "
            "solvable; use the closed-form module)"
        )
    b = _ext(beta if beta is not None else default_beta(kappa), bits)
    if not b > 0:
        raise ValueError("beta must be > 0")
    u0 = ((reduced.lambda_big + 1) / (2 * b * reduced.gamma)).nth_root(4)
    return ProblemSetup(kappa=kappa, beta=b, u0=u0, reduced=reduced)


def epsilon_to_energy(epsilon, params: PotentialParams) -> ExtReal:
    """Invert the energy scaling: E = 2 m B**2 eps / hbar**2."""
    if not params.B > 0:
        raise ScalingError("physical energy mapping requires B > 0")
    eps = _ext(epsilon, params.precision_bits)
    return 2 * params.m * params.B * params.B * eps / (params.hbar * params.hbar)


def energy_to_epsilon(energy, params: PotentialParams) -> ExtReal:
    """Forward energy scaling: eps = hbar**2 E / (2 m B**2)."""
    if not params.B > 0:
        raise ScalingError("reduced energy mapping requires B > 0")
    e = _ext(energy, params.precision_bits)
    return e * params.hbar * params.hbar / (2 * params.m * params.B * params.B)
