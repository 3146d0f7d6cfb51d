"""Closed-form bound states for kappa = 0, -1 and -2.

These family members reduce to the exactly solvable A/r**2 - B/r core:

    kappa = 0   adds a constant shift C to every level,
    kappa = -1  replaces the Coulomb strength B by B - C,
    kappa = -2  folds C into the inverse-square strength A.

Levels of the core problem are

    E = -(m Beff**2 / 2 hbar**2) * (n + 1/2 + sqrt((l+1/2)**2 + Aeff_tilde))**-2

and the regular eigenfunctions are r**(Lambda+1) * exp(-eps*r) times a
terminating confluent-hypergeometric polynomial, with Lambda the effective
angular momentum and eps the decay rate B_tilde_eff / (2 (n + Lambda + 1)).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import ExtReal
from .errors import DomainError, KappaRangeError
from .problems import PotentialParams
from .radial import RadialWavefunction

__all__ = [
    "ClosedForm",
    "closed_form",
    "exact_energy",
    "kummer_terminating",
    "exact_wavefunction",
]

CLOSED_FORM_KAPPAS = (0, -1, -2)


@dataclass(frozen=True)
class ClosedForm:
    """Eigenvalue data for one closed-form bound state."""

    kappa: int
    n: int
    l: int
    lambda_cf: ExtReal   # effective angular momentum
    eps_cf: ExtReal      # exponential decay rate of the eigenfunction
    energy: ExtReal


def _check_state(params: PotentialParams, n: int, l: int):
    if params.kappa not in CLOSED_FORM_KAPPAS:
        raise KappaRangeError(
            f"kappa={params.kappa} has no closed form; use the iterative "
            "solver (kappa in {1, 2})"
        )
    if n < 0 or l < 0:
        raise ValueError("n and l must be >= 0")


def closed_form(params: PotentialParams, n: int, l: int) -> ClosedForm:
    """Closed-form level and decay rate for the given state."""
    _check_state(params, n, l)
    bits = params.precision_bits
    hbar2 = params.hbar * params.hbar
    two_m = 2 * params.m
    half = ExtReal("0.5", bits)

    if params.kappa == -2:
        a_eff = params.A + params.C
        b_eff = params.B
    elif params.kappa == -1:
        a_eff = params.A
        b_eff = params.B - params.C
        if not b_eff > 0:
            raise DomainError(
                "kappa=-1 bound states require B > C (effective Coulomb "
                "attraction vanishes otherwise)"
            )
    else:
        a_eff = params.A
        b_eff = params.B

    a_tilde_eff = two_m * a_eff / hbar2
    b_tilde_eff = two_m * b_eff / hbar2
    lh = ExtReal(l, bits) + half
    lam = -half + (lh * lh + a_tilde_eff).sqrt()
    denom = ExtReal(n, bits) + half + (lh * lh + a_tilde_eff).sqrt()
    core = -(params.m * b_eff * b_eff / (2 * hbar2)) / (denom * denom)
    energy = core + params.C if params.kappa == 0 else core
    eps = b_tilde_eff / (2 * (ExtReal(n, bits) + lam + 1))
    return ClosedForm(kappa=params.kappa, n=n, l=l, lambda_cf=lam,
                      eps_cf=eps, energy=energy)


def exact_energy(params: PotentialParams, n: int, l: int) -> ExtReal:
    """Bound-state energy E_nl for kappa in {0, -1, -2}."""
    return closed_form(params, n, l).energy


def kummer_terminating(neg_n: int, b, x) -> ExtReal:
    """Terminating confluent hypergeometric series 1F1(neg_n, b; x).

    neg_n must be a non-positive integer, so the series is the degree-|neg_n|
    polynomial sum_j ((neg_n)_j / (b)_j) x**j / j! with Pochhammer factors.
    """
    if neg_n > 0:
        raise ValueError("first argument must be a non-positive integer")
    b = b if isinstance(b, ExtReal) else ExtReal(b)
    x = x if isinstance(x, ExtReal) else ExtReal(x, b.precision_bits)
    n = -neg_n
    if b <= 0 and b == ExtReal(round(float(b)), b.precision_bits):
        raise DomainError(f"1F1 pole: b={b} is a non-positive integer")
    bits = max(b.precision_bits, x.precision_bits)
    total = ExtReal(1, bits)
    term = ExtReal(1, bits)
    for j in range(n):
        term = term * (neg_n + j) / (b + j) * x / (j + 1)
        total = total + term
    return total


def exact_wavefunction(params: PotentialParams, n: int, l: int,
                       r_grid) -> RadialWavefunction:
    """Sampled regular eigenfunction, numerically normalized on the grid.

    R(r) = N r**(Lambda+1) exp(-eps r) 1F1(-n, 2 Lambda + 2; 2 eps r); the
    r**(Lambda+1) prefactor carries the regular short-range behavior.
    """
    cf = closed_form(params, n, l)
    r = np.asarray([float(x) for x in r_grid], dtype=float)
    if r.size < 2 or np.any(r <= 0) or np.any(np.diff(r) <= 0):
        raise ValueError("r_grid must be ascending and strictly positive")
    lam = float(cf.lambda_cf)
    eps = float(cf.eps_cf)
    b = 2 * lam + 2
    poly = np.array([
        float(kummer_terminating(-n, ExtReal(b, 64), ExtReal(2 * eps * x, 64)))
        for x in r
    ])
    values = r ** (lam + 1) * np.exp(-eps * r) * poly
    return RadialWavefunction.normalized(r, values)
