"""Finite-difference eigenvalue oracle, independent of the iteration engine.

A fourth-order three-term integrator solves u'' = f(r) u on a uniform grid,
outward from a regular-origin seed and inward from a decaying tail.  The
target level is isolated by bisection on the composite node count, then
refined by bisection on the Wronskian of the two branches at a fixed
matching index (the outer classical turning point).  Everything runs in
double precision; the oracle targets 6-8 digits, not the engine's 10.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .algebra import ExtReal
from .errors import ResolutionWarning, WindowError
from .problems import PotentialParams

__all__ = [
    "GridSpec",
    "suggest_grid",
    "numerov_eigenvalue",
    "count_nodes",
    "compare",
    "ComparisonReport",
]

_RESCALE = 1e250


@dataclass(frozen=True)
class GridSpec:
    """Uniform radial grid (r_min, r_max, points)."""

    r_min: float
    r_max: float
    points: int

    def __post_init__(self):
        if not self.r_min > 0:
            raise ValueError("r_min must be > 0")
        if not self.r_max > self.r_min:
            raise ValueError("r_max must exceed r_min")
        if self.points < 1000:
            raise ValueError("points must be >= 1000")

    @property
    def h(self) -> float:
        return (self.r_max - self.r_min) / (self.points - 1)

    def radii(self) -> np.ndarray:
        return np.linspace(self.r_min, self.r_max, self.points)


def _effective(params: PotentialParams, l: int):
    """Scaled effective potential terms: f(r) = w(r) - (2m/hbar^2) E."""
    A = float(params.A)
    B = float(params.B)
    C = float(params.C)
    m = float(params.m)
    hbar = float(params.hbar)
    scale = 2 * m / hbar**2
    cent = scale * A + l * (l + 1)
    btil = scale * B
    ctil = scale * C
    lp = -0.5 + math.sqrt(0.25 + cent)
    return scale, cent, btil, ctil, lp


def suggest_grid(params: PotentialParams, n: int, l: int) -> GridSpec:
    """Box heuristic: short-range start, tail sized from the decay scale."""
    scale, cent, btil, ctil, lp = _effective(params, l)
    kappa = params.kappa
    if kappa > 0:
        # confining tail: reach past the classical turning point of a state
        # a few levels above the target
        gamma2 = ctil
        e_guess = max(1.0, btil) * (n + l + 3) ** 2
        r_turn = (e_guess / gamma2) ** (1.0 / kappa) if gamma2 > 0 else 10.0
        r_max = 2.0 * max(r_turn ** 0.5 if kappa == 2 else r_turn, 3.0)
        r_max = min(r_max, 400.0)
    else:
        # Coulomb-dominated tail: 1/e-length from the hydrogen-like decay
        b_eff = btil - (ctil if kappa == -1 else 0.0)
        b_eff = max(b_eff, 1e-6)
        lam = -0.5 + math.sqrt(0.25 + cent + (ctil if kappa == -2 else 0.0))
        decay = b_eff / (2 * (n + lam + 1))
        r_max = min(max(38.0 / decay, 30.0), 1200.0)
    r_min = min(1e-4, r_max * 1e-6)
    points = int(min(max(8000, 120 * r_max), 60000))
    return GridSpec(r_min=r_min, r_max=r_max, points=points)


def _pass(e_scaled, r, w, lp, btil, im, h):
    """One outward+inward sweep; returns (nodes, branch triples at im)."""
    t = (h * h / 12.0) * (w - e_scaled)
    c = (1.0 - t).tolist()
    N = len(r)
    uo = [0.0] * (im + 2)
    # regular seed with the first-order short-range correction
    uo[0] = r[0] ** (lp + 1) * (1.0 - btil * r[0] / (2 * lp + 2))
    uo[1] = r[1] ** (lp + 1) * (1.0 - btil * r[1] / (2 * lp + 2))
    nodes = 0
    for i in range(1, im + 1):
        un = ((12.0 - 10.0 * c[i]) * uo[i] - c[i - 1] * uo[i - 1]) / c[i + 1]
        uo[i + 1] = un
        if un != 0.0 and uo[i] != 0.0 and (un < 0) != (uo[i] < 0):
            nodes += 1
        if abs(un) > _RESCALE:
            sc = 1.0 / _RESCALE
            for j in range(i + 2):
                uo[j] *= sc
    ui = [0.0] * N
    ui[N - 2] = 1e-30
    for i in range(N - 2, im - 1, -1):
        un = ((12.0 - 10.0 * c[i]) * ui[i] - c[i + 1] * ui[i + 1]) / c[i - 1]
        ui[i - 1] = un
        if ui[i] != 0.0 and un != 0.0 and (un < 0) != (ui[i] < 0):
            nodes += 1
        if abs(un) > _RESCALE:
            sc = 1.0 / _RESCALE
            for j in range(i - 1, N):
                ui[j] *= sc
    return nodes, (uo[im - 1], uo[im], uo[im + 1]), (ui[im - 1], ui[im], ui[im + 1])


def _turning_index(e_scaled, w, N):
    allowed = np.nonzero(w - e_scaled < 0)[0]
    if len(allowed) == 0:
        return None
    return int(min(max(allowed[-1], 2), N - 3))


def count_nodes(params: PotentialParams, l: int, grid: GridSpec, energy) -> int:
    """Interior node count of the two-branch solution at the given energy."""
    scale, cent, btil, ctil, lp = _effective(params, l)
    r = grid.radii()
    w = cent / r**2 - btil / r + ctil * np.power(r, params.kappa)
    e_scaled = scale * float(energy)
    im = _turning_index(e_scaled, w, grid.points)
    if im is None:
        raise WindowError("energy lies below the potential everywhere on the grid")
    nodes, _, _ = _pass(e_scaled, r, w, lp, btil, im, grid.h)
    return nodes


def numerov_eigenvalue(params: PotentialParams, n: int, l: int, grid: GridSpec,
                       e_min=None, e_max=None, *,
                       verify_resolution: bool = False) -> ExtReal:
    """Energy of the state with n interior nodes, to ~1e-8 relative.

    The energy window defaults to [floor below the ground state,
    V_eff(r_max)].  Raises WindowError when the requested node count cannot
    be bracketed inside the window.
    """
    if n < 0 or l < 0:
        raise ValueError("n and l must be >= 0")
    scale, cent, btil, ctil, lp = _effective(params, l)
    r = grid.radii()
    w = cent / r**2 - btil / r + ctil * np.power(r, params.kappa)
    h = grid.h
    N = grid.points

    if e_max is None:
        e_max = float(w[-1]) / scale
    if e_min is None:
        b_floor = btil + (ctil if params.kappa == -1 else 0.0)
        e_min = -(b_floor**2) / scale - 1.0
    e_min = float(e_min)
    e_max = float(e_max)
    if not e_max > e_min:
        raise WindowError(f"empty energy window [{e_min}, {e_max}]")

    def nodecount(E):
        im = _turning_index(scale * E, w, N)
        if im is None:
            return -1
        return _pass(scale * E, r, w, lp, btil, im, h)[0]

    n_lo = nodecount(e_min)
    n_hi = nodecount(e_max)
    if n_lo > n or n_hi <= n:
        raise WindowError(
            f"node count spans [{n_lo}, {n_hi}] over the energy window; "
            f"n={n} is unreachable (widen the window or the box)"
        )

    # coarse isolation: window where the composite count equals n
    lo, hi = e_min, e_max
    for _ in range(48):
        mid = 0.5 * (lo + hi)
        if nodecount(mid) > n:
            hi = mid
        else:
            lo = mid
    e_top = lo
    if nodecount(e_min) >= n:
        e_bot = e_min
    else:
        lo, hi = e_min, e_top
        for _ in range(48):
            mid = 0.5 * (lo + hi)
            if nodecount(mid) >= n:
                hi = mid
            else:
                lo = mid
        e_bot = lo

    im = _turning_index(scale * 0.5 * (e_bot + e_top), w, N)
    if im is None:
        raise WindowError("no classically allowed region at the window midpoint")

    def wronskian(E):
        _, uo3, ui3 = _pass(scale * E, r, w, lp, btil, im, h)
        duo = (uo3[2] - uo3[0]) / (2 * h)
        dui = (ui3[2] - ui3[0]) / (2 * h)
        return duo * ui3[1] - dui * uo3[1]

    a, b = e_bot, e_top
    fa, fb = wronskian(a), wronskian(b)
    if (fa < 0) == (fb < 0):
        # hunt inside the window for the sign change
        probes = np.linspace(e_bot, e_top, 65)
        vals = [wronskian(p) for p in probes]
        hit = None
        for i in range(len(probes) - 1):
            if (vals[i] < 0) != (vals[i + 1] < 0):
                hit = i
                break
        if hit is None:
            raise WindowError(
                "matching mismatch does not change sign inside the node "
                "window; grid or window unsuitable"
            )
        a, b, fa = probes[hit], probes[hit + 1], vals[hit]
    for _ in range(80):
        mid = 0.5 * (a + b)
        fm = wronskian(mid)
        if (fm < 0) == (fa < 0):
            a, fa = mid, fm
        else:
            b = mid
        if b - a <= 1e-13 * max(1.0, abs(a)):
            break
    energy = 0.5 * (a + b)

    if verify_resolution:
        fine = GridSpec(grid.r_min, grid.r_max, 2 * grid.points)
        refined = float(numerov_eigenvalue(params, n, l, fine, e_min, e_max))
        if abs(refined - energy) > 1e-6 * max(1.0, abs(energy)):
            warnings.warn(
                f"eigenvalue shifts by {abs(refined - energy):.2e} when the "
                "grid is doubled; increase points",
                ResolutionWarning,
                stacklevel=2,
            )
    return ExtReal(energy, 53)


@dataclass(frozen=True)
class ComparisonReport:
    """Outcome of an eigenvalue cross-check."""

    passed: bool
    abs_delta: float
    rel_delta: float
    e_candidate: float
    e_oracle: float


def compare(e_candidate, e_oracle, rel_tol, abs_tol) -> ComparisonReport:
    """Pass iff |d| <= abs_tol or |d| / max(|oracle|, abs_tol) <= rel_tol."""
    rel_tol = float(rel_tol)
    abs_tol = float(abs_tol)
    if not (rel_tol > 0 and abs_tol > 0):
        raise ValueError("tolerances must be > 0")
    ec = float(e_candidate)
    eo = float(e_oracle)
    diff = abs(ec - eo)
    rel = diff / max(abs(eo), abs_tol)
    return ComparisonReport(
        passed=(diff <= abs_tol or rel <= rel_tol),
        abs_delta=diff,
        rel_delta=rel,
        e_candidate=ec,
        e_oracle=eo,
    )
