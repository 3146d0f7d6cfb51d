"""Iteration engine: recurrence, quantization residual, root tracking.

The second-order problem f'' = lambda0 f' + s0 f is iterated through

    lambda_k = lambda_{k-1}' + s_{k-1} + lambda0 * lambda_{k-1}
    s_k      = s_{k-1}'      + s0 * lambda_{k-1}

and eigenvalue candidates are the roots (in eps) of the termination residual

    delta_k = lambda_k * s_{k-1} - lambda_{k-1} * s_k

evaluated at the pivot u0.  The iteration level reported throughout this
module (and in the benchmark tables) counts the stability test of the
approximant ratio s_k/lambda_k against s_{k+1}/lambda_{k+1}: the residual at
reported level k is built from the recurrence pairs k+1 and k.

Everything here is pure and re-entrant: one converge/refine run is serial in
k, but distinct eps candidates, (n, l) states and table rows can be solved
concurrently and merged by (n, l) ordering.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import copysign, exp, log, sqrt

import numpy as np

from .algebra import ExtReal, LaurentPoly
from .errors import BracketError, PrecisionError, SingularIntegrandError
from .problems import ProblemSetup
from .radial import MIN_GRID_POINTS, RadialWavefunction

__all__ = [
    "AimPair",
    "EigenResult",
    "STATUS_CONVERGED",
    "STATUS_OSCILLATING",
    "STATUS_MAX_ITERATIONS",
    "aim_step",
    "delta",
    "residual",
    "scan_roots",
    "refine_root",
    "converge",
    "solve_state",
    "default_scan_range",
    "wavefunction",
]

STATUS_CONVERGED = "converged"
STATUS_OSCILLATING = "oscillating"
STATUS_MAX_ITERATIONS = "max-iterations"


@dataclass(frozen=True, eq=False)
class AimPair:
    """Recurrence pair (lambda_k, s_k); k counts steps from the seed."""

    k: int
    lam: LaurentPoly
    s: LaurentPoly


@dataclass(frozen=True, eq=False)
class EigenResult:
    """A tracked eigenvalue with its per-level history.

    trace holds (level, eps) for every resolved level; k_converged is the
    first level of the agreeing triple when status is "converged", else
    None.  n_index is the ordinal of the root in ascending eps for the
    setup's l.
    """

    epsilon: ExtReal
    n_index: int
    l: int
    k_converged: int | None
    trace: tuple[tuple[int, ExtReal], ...]
    status: str
    e_physical: ExtReal | None = None


def aim_step(prev: AimPair, lambda0: LaurentPoly, s0: LaurentPoly) -> AimPair:
    """One recurrence application."""
    lam_next = prev.lam.differentiate() + prev.s + lambda0 * prev.lam
    s_next = prev.s.differentiate() + s0 * prev.lam
    return AimPair(prev.k + 1, lam_next, s_next)


def delta(curr: AimPair, prev: AimPair, u0) -> ExtReal:
    """Termination residual of two consecutive pairs at the pivot.

    The polynomials are combined first and evaluated once, at full working
    precision.  Swapping the arguments negates the result exactly.
    """
    try:
        combined = curr.lam * prev.s - prev.lam * curr.s
        value = combined.evaluate(u0)
    except PrecisionError as exc:
        raise PrecisionError(
            "quantization residual lost all significance; increase "
            "precision_bits"
        ) from exc
    return value


def _chain_pairs(setup: ProblemSetup, eps, level: int, start_from_unit: bool):
    """Recurrence pairs (level+1, level) for the reported iteration level.

    With start_from_unit the chain is seeded by (1, 0) and reproduces the
    standard seed after one extra step; the reported levels line up in both
    modes, which converge() exploits as a self-test hook.
    """
    lambda0 = setup.lambda0()
    s0 = setup.s0(eps)
    bits = setup.precision_bits
    if start_from_unit:
        pair = AimPair(
            -1,
            LaurentPoly.constant(ExtReal(1, bits)),
            LaurentPoly.zero(),
        )
    else:
        pair = AimPair(0, lambda0, s0)
    prev = None
    while pair.k <= level:
        prev = pair
        pair = aim_step(pair, lambda0, s0)
    return pair, prev


def residual(setup: ProblemSetup, eps, level: int, *,
             start_from_unit: bool = False) -> ExtReal:
    """delta at the pivot for the reported iteration level (level >= 1)."""
    if level < 1:
        raise ValueError("iteration level must be >= 1")
    curr, prev = _chain_pairs(setup, eps, level, start_from_unit)
    return delta(curr, prev, setup.u0)


def _sign(x: ExtReal) -> int:
    if x > 0:
        return 1
    if x < 0:
        return -1
    return 0


def scan_roots(setup: ProblemSetup, k: int, eps_min, eps_max, step, *,
               start_from_unit: bool = False,
               max_brackets: int | None = None) -> list[tuple[ExtReal, ExtReal]]:
    """Sign-change brackets of the level-k residual over [eps_min, eps_max].

    Brackets are returned in ascending order; the j-th bracket holds the
    state with radial quantum number n = j for the setup's l.  An empty
    result is not an error — widen the range and rescan.  max_brackets stops
    the sweep early once enough low-lying roots are isolated.
    """
    bits = setup.precision_bits
    lo = ExtReal(eps_min, bits)
    hi = ExtReal(eps_max, bits)
    h = ExtReal(step, bits)
    if not h > 0:
        raise ValueError("step must be > 0")
    if not lo < hi:
        return []
    brackets: list[tuple[ExtReal, ExtReal]] = []
    prev_pt = lo
    prev_sign = _sign(residual(setup, lo, k, start_from_unit=start_from_unit))
    if prev_sign == 0:
        brackets.append((lo, lo))
    pt = lo + h
    while True:
        if pt > hi:
            pt = hi
        sg = _sign(residual(setup, pt, k, start_from_unit=start_from_unit))
        if sg == 0:
            brackets.append((pt, pt))
        elif prev_sign != 0 and sg != prev_sign:
            brackets.append((prev_pt, pt))
        if max_brackets is not None and len(brackets) >= max_brackets:
            break
        prev_pt, prev_sign = pt, sg
        if pt == hi:
            break
        pt = pt + h
    return brackets


def refine_root(setup: ProblemSetup, k: int, bracket, tol, *,
                start_from_unit: bool = False) -> ExtReal:
    """Bisect the level-k residual to a root within the given bracket."""
    bits = setup.precision_bits
    a = ExtReal(bracket[0], bits)
    b = ExtReal(bracket[1], bits)
    tol = ExtReal(tol, bits)
    if not tol > 0:
        raise ValueError("tol must be > 0")
    fa = residual(setup, a, k, start_from_unit=start_from_unit)
    if fa == 0:
        return a
    fb = residual(setup, b, k, start_from_unit=start_from_unit)
    if fb == 0:
        return b
    sa = _sign(fa)
    if sa == _sign(fb):
        raise BracketError(
            f"residual does not change sign over [{a}, {b}] at level {k}; "
            "the bracket was lost (possible precision exhaustion)"
        )
    while (b - a) > tol:
        mid = (a + b) / 2
        if mid == a or mid == b:  # bracket narrower than the working precision
            break
        fm = residual(setup, mid, k, start_from_unit=start_from_unit)
        if fm == 0:
            return mid
        if _sign(fm) == sa:
            a = mid
        else:
            b = mid
    return (a + b) / 2


def _bracket_near(setup, k, center, width, cap, start_from_unit):
    """Expand a symmetric bracket around center until the residual flips."""
    w = width
    for _ in range(10):
        lo = center - w
        hi = center + w
        flo = residual(setup, lo, k, start_from_unit=start_from_unit)
        fhi = residual(setup, hi, k, start_from_unit=start_from_unit)
        if flo == 0:
            return lo, lo
        if fhi == 0:
            return hi, hi
        if _sign(flo) != _sign(fhi):
            return lo, hi
        if w >= cap:
            break
        w = w * 6
        if w > cap:
            w = cap
    return None


def converge(setup: ProblemSetup, approx_eps, k_min: int, k_max: int,
             tol="1e-9", *, k_step: int = 1, refine_tol="1e-12",
             n_index: int = 0, start_from_unit: bool = False,
             full_trace: bool = False, max_bracket_width=None,
             oscillation_window: int = 10) -> EigenResult:
    """Track the root near approx_eps across levels k_min..k_max.

    Each level re-resolves the root, warm-started from the previous level's
    value.  Status becomes "converged" once three consecutive resolved
    levels agree within tol (k_converged is the first of the triple);
    "oscillating" when the successive differences grow monotonically over
    ``oscillation_window`` consecutive levels; "max-iterations" otherwise.
    With full_trace the tracking continues to k_max even after the
    convergence certificate is met, so the complete per-level history is
    recorded.
    """
    if k_min < 2:
        raise ValueError("k_min must be >= 2")
    if k_max < k_min:
        raise ValueError("k_max must be >= k_min")
    bits = setup.precision_bits
    tol = ExtReal(tol, bits)
    refine_tol = ExtReal(refine_tol, bits)
    if not (tol > 0 and refine_tol > 0):
        raise ValueError("tolerances must be > 0")
    est = ExtReal(approx_eps, bits)
    if max_bracket_width is None:
        cap = (abs(est) + 1) * ExtReal("0.05", bits)
    else:
        cap = ExtReal(max_bracket_width, bits)
    width = refine_tol * 256
    start_width = (abs(est) + 1) * ExtReal("1e-3", bits)
    if start_width > cap:
        start_width = cap
    width = start_width

    trace: list[tuple[int, ExtReal]] = []
    diffs: list[ExtReal] = []
    status = STATUS_MAX_ITERATIONS
    k_converged = None

    for lev in range(k_min, k_max + 1, k_step):
        found = _bracket_near(setup, lev, est, width, cap, start_from_unit)
        if found is None:
            raise BracketError(
                f"no residual sign change within ±{cap} of {est} at level "
                f"{lev}",
                trace=trace,
            )
        lo, hi = found
        if lo == hi:
            root = lo
        else:
            root = refine_root(setup, lev, (lo, hi), refine_tol,
                               start_from_unit=start_from_unit)
        if trace:
            diffs.append(abs(root - trace[-1][1]))
        trace.append((lev, root))
        est = root
        if diffs:
            width = diffs[-1] * 4 + refine_tol * 64
            if width > cap:
                width = cap
        if (status != STATUS_CONVERGED and len(trace) >= 3
                and diffs[-1] <= tol and diffs[-2] <= tol
                and abs(trace[-1][1] - trace[-3][1]) <= tol):
            status = STATUS_CONVERGED
            k_converged = trace[-3][0]
            if not full_trace:
                break
        if (status != STATUS_CONVERGED
                and len(diffs) >= oscillation_window
                and all(diffs[i] > diffs[i - 1]
                        for i in range(len(diffs) - oscillation_window + 1,
                                       len(diffs)))):
            status = STATUS_OSCILLATING
            break

    return EigenResult(
        epsilon=trace[-1][1],
        n_index=n_index,
        l=setup.reduced.l,
        k_converged=k_converged,
        trace=tuple(trace),
        status=status,
    )


def default_scan_range(setup: ProblemSetup, n_max: int, l_max: int | None = None):
    """Heuristic eps window covering states up to (n_max, l_max)."""
    if l_max is None:
        l_max = setup.reduced.l
    bits = setup.precision_bits
    lo = ExtReal(-2, bits)
    hi = 4 * setup.reduced.gamma * ExtReal((n_max + l_max + 2) ** 2, bits)
    if not hi > lo:
        hi = lo + 8
    return lo, hi


def solve_state(setup: ProblemSetup, n: int, *, k_max: int = 100,
                k_min: int | None = None, tol="1e-9", refine_tol="1e-12",
                scan_k: int | None = None, scan_range=None, scan_step=None,
                k_step: int = 1, full_trace: bool = False,
                start_from_unit: bool = False) -> EigenResult:
    """Locate and converge the n-th eigenvalue of the setup.

    A coarse residual scan at a modest level brackets the spectrum; the
    n-th bracket is refined and then tracked across levels by converge().
    If the scan finds too few roots the window is widened and rescanned.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    bits = setup.precision_bits
    if scan_k is None:
        scan_k = min(max(10, 2 * n + 6), k_max)
    if scan_range is None:
        lo, hi = default_scan_range(setup, n)
    else:
        lo, hi = ExtReal(scan_range[0], bits), ExtReal(scan_range[1], bits)
    if scan_step is None:
        step = (hi - lo) / 512
    else:
        step = ExtReal(scan_step, bits)

    brackets = scan_roots(setup, scan_k, lo, hi, step, max_brackets=n + 2)
    attempts = 0
    while len(brackets) <= n and attempts < 4:
        span = hi - lo
        hi = hi + span
        step = step * 2
        brackets = scan_roots(setup, scan_k, lo, hi, step, max_brackets=n + 2)
        attempts += 1
    if len(brackets) <= n:
        raise BracketError(
            f"scan found only {len(brackets)} roots in [{lo}, {hi}] at "
            f"level {scan_k}; cannot reach n={n}"
        )
    blo, bhi = brackets[n]
    approx = refine_root(setup, scan_k, (blo, bhi), refine_tol,
                         start_from_unit=start_from_unit)
    # cap the warm-start bracket by the distance to neighbouring roots
    gaps = []
    if n > 0:
        gaps.append(abs(blo - brackets[n - 1][1]))
    if n + 1 < len(brackets):
        gaps.append(abs(brackets[n + 1][0] - bhi))
    cap = min(gaps) / 2 if gaps else (bhi - blo) * 8 + ExtReal(1, bits)
    if not cap > 0:
        cap = ExtReal("0.05", bits)
    if k_min is None:
        k_min = scan_k
    return converge(setup, approx, k_min, k_max, tol,
                    k_step=k_step, refine_tol=refine_tol, n_index=n,
                    start_from_unit=start_from_unit, full_trace=full_trace,
                    max_bracket_width=cap)


# -- wavefunction generation -------------------------------------------------


def _poly_roots_on_grid(poly: LaurentPoly, grid_vals, grid, bits):
    """Roots of poly between consecutive grid points, by sign scan + bisection."""
    roots = []
    for i in range(len(grid) - 1):
        va, vb = grid_vals[i], grid_vals[i + 1]
        sa, sb = _sign(va), _sign(vb)
        if sa == 0:
            roots.append(grid[i])
            continue
        if sb == 0 or sa == sb:
            continue
        a = ExtReal(grid[i], bits)
        b = ExtReal(grid[i + 1], bits)
        for _ in range(80):
            mid = (a + b) / 2
            fm = poly.evaluate(mid)
            if fm == 0:
                a = b = mid
                break
            if _sign(fm) == sa:
                a = mid
            else:
                b = mid
        roots.append(float((a + b) / 2))
    return roots


def wavefunction(setup: ProblemSetup, epsilon, k: int, u_grid) -> RadialWavefunction:
    """Sample the radial eigenfunction for a converged eigenvalue.

    f is rebuilt from the level-k recurrence pair by quadrature of the
    approximant ratio; the full reduced radial function is

        R = sqrt(u) * u**(Lambda+1) * exp(-gamma*beta*u**4/2) * f(u)

    mapped to r = r0 * u**2 (r0 = 1 for dimensionless setups) and normalized
    to unit squared integral over the grid.  Grid points falling within a
    relative 1e-6 of a lambda_k root are nudged off the pole; the ratio has
    a residue near -1 at each wavefunction node, where the sample sign
    flips.
    """
    u = [float(x) for x in u_grid]
    if len(u) < MIN_GRID_POINTS:
        raise ValueError(f"grid must have at least {MIN_GRID_POINTS} points")
    if u[0] <= 0 or any(b <= a for a, b in zip(u, u[1:])):
        raise ValueError("grid must be ascending and strictly positive")
    bits = setup.precision_bits
    eps = ExtReal(epsilon, bits)
    curr, _ = _chain_pairs(setup, eps, k, start_from_unit=False)
    lam_poly, s_poly = curr.lam, curr.s
    dlam_poly = lam_poly.differentiate()

    lam_vals = [lam_poly.evaluate(ExtReal(x, bits)) for x in u]
    poles = []
    for u_star in _poly_roots_on_grid(lam_poly, lam_vals, u, bits):
        us = ExtReal(u_star, bits)
        rho = float(s_poly.evaluate(us) / dlam_poly.evaluate(us))
        poles.append((u_star, rho))

    # keep samples off the poles
    for j in range(len(u)):
        for u_star, _rho in poles:
            if abs(u[j] - u_star) < 1e-6 * u_star:
                shift = copysign(1.5e-6 * u_star, u[j] - u_star)
                if shift == 0:
                    shift = 1.5e-6 * u_star
                nudged = u_star + shift
                lo_ok = j == 0 or u[j - 1] < nudged
                hi_ok = j == len(u) - 1 or nudged < u[j + 1]
                if not (lo_ok and hi_ok):
                    raise SingularIntegrandError(
                        f"cannot move grid point {u[j]} off the pole at "
                        f"{u_star}"
                    )
                u[j] = nudged
                lam_vals[j] = lam_poly.evaluate(ExtReal(u[j], bits))

    ratio = []
    for x, lv in zip(u, lam_vals):
        if lv == 0:
            raise SingularIntegrandError(f"ratio pole persists at u={x}")
        ratio.append(float(s_poly.evaluate(ExtReal(x, bits)) / lv))

    npts = len(u)
    ln_f = [0.0] * npts
    sign = [1.0] * npts
    cur = 1.0
    for i in range(npts - 1):
        a, b = u[i], u[i + 1]
        inside = [(us, rho) for us, rho in poles if a < us < b]
        if not inside:
            dln = -0.5 * (ratio[i] + ratio[i + 1]) * (b - a)
        else:
            us, rho = inside[0]
            ga = ratio[i] - rho / (a - us)
            gb = ratio[i + 1] - rho / (b - us)
            dln = -0.5 * (ga + gb) * (b - a)
            dln -= rho * log(abs(b - us) / abs(a - us))
            if round(-rho) % 2 == 1:
                cur = -cur
        ln_f[i + 1] = ln_f[i] + dln
        sign[i + 1] = cur

    lam_big = float(setup.reduced.lambda_big)
    gb = float(setup.reduced.gamma * setup.beta)
    ln_r = [
        (lam_big + 1.5) * log(x) - 0.5 * gb * x ** 4 + lf
        for x, lf in zip(u, ln_f)
    ]
    peak = max(ln_r)
    values = np.array([s * exp(lr - peak) for s, lr in zip(sign, ln_r)])
    r0 = float(setup.reduced.r0) if setup.reduced.r0 is not None else 1.0
    r = r0 * np.asarray(u, dtype=float) ** 2
    return RadialWavefunction.normalized(r, values)
