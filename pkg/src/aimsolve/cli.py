"""Command-line front end.

Grammar:

    aim <solve|converge|exact|table|wavefunction|oracle>
        [--kappa K]
        [--A x --B x --C x --mass x --hbar x | --reduced --a-tilde x --gamma x]
        [--n spec --l spec] [--beta x] [--k-max N] [--tol x]
        [--precision-bits N] [--scan-min x --scan-max x --scan-step x]
        [--format json|csv] [--out PATH]

Exit codes: 0 success, 2 parameter validation, 3 convergence failure,
4 reproduction/comparison mismatch.  AIM_PRECISION_BITS overrides the
default --precision-bits.  Numerics are printed at 10 significant digits;
identical invocations produce byte-identical output.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from math import isfinite

import click

from .algebra import DEFAULT_PRECISION_BITS, ExtReal
from .closedform import closed_form, exact_wavefunction
from .engine import (
    STATUS_CONVERGED,
    default_scan_range,
    solve_state,
    wavefunction as aim_wavefunction,
)
from .errors import AimSolveError, BracketError, PrecisionError
from .numerov import GridSpec, compare, numerov_eigenvalue, suggest_grid
from .parallel import default_workers, parallel_map
from .problems import (
    PotentialParams,
    ReducedParams,
    epsilon_to_energy,
    make_setup,
    reduce_params,
)
from .reference import TABLE_IDS, run_table

EXIT_VALIDATION = 2
EXIT_CONVERGENCE = 3
EXIT_MISMATCH = 4


def _fail(message: str, code: int = EXIT_VALIDATION):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _num(x):
    """Numeric output contract: 10 significant digits."""
    if x is None:
        return None
    v = float(x)
    if not isfinite(v):
        return None
    return float(f"{v:.10g}")


def parse_index_spec(spec: str) -> list[int]:
    """Quantum-number lists: '2', '0,2,5' or '0..3'."""
    spec = spec.strip()
    try:
        if ".." in spec:
            lo_s, hi_s = spec.split("..", 1)
            lo, hi = int(lo_s), int(hi_s)
            if hi < lo:
                raise ValueError
            values = list(range(lo, hi + 1))
        elif "," in spec:
            values = [int(p) for p in spec.split(",")]
        else:
            values = [int(spec)]
    except ValueError:
        raise click.BadParameter(f"bad index spec {spec!r}")
    if any(v < 0 for v in values) or not values:
        raise click.BadParameter(f"indices must be >= 0 in {spec!r}")
    return sorted(set(values))


def _emit(records, keys, fmt, out, list_keys=()):
    """Write records with a fixed column order as JSON or CSV."""
    if fmt == "json":
        payload = [{k: rec.get(k) for k in keys} for rec in records]
        text = json.dumps(payload, indent=2) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(keys)
        for rec in records:
            row = []
            for k in keys:
                v = rec.get(k)
                if k in list_keys and v is not None:
                    v = ";".join(f"{a}:{b}" for a, b in v)
                row.append("" if v is None else v)
            writer.writerow(row)
        text = buf.getvalue()
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _potential_options(f):
    for opt in reversed([
        click.option("--kappa", type=int, required=True,
                     help="power-law exponent, -2..2"),
        click.option("--A", "a_str", default=None, help="inverse-square strength"),
        click.option("--B", "b_str", default=None, help="Coulomb strength"),
        click.option("--C", "c_str", default=None, help="power-law strength"),
        click.option("--mass", default=None, help="particle mass (default 1)"),
        click.option("--hbar", default=None, help="reduced Planck constant (default 1)"),
        click.option("--precision-bits", type=int, default=DEFAULT_PRECISION_BITS,
                     envvar="AIM_PRECISION_BITS", show_default=True,
                     help="significand width for all internal arithmetic"),
    ]):
        f = opt(f)
    return f


def _reduced_options(f):
    for opt in reversed([
        click.option("--reduced", is_flag=True,
                     help="interpret inputs as dimensionless (a_tilde, gamma)"),
        click.option("--a-tilde", default=None, help="2mA/hbar^2"),
        click.option("--gamma", default=None,
                     help="sqrt(2 m C r0^(kappa+2) / hbar^2)"),
    ]):
        f = opt(f)
    return f


def _output_options(f):
    for opt in reversed([
        click.option("--format", "fmt", type=click.Choice(["json", "csv"]),
                     default="json", show_default=True),
        click.option("--out", type=click.Path(dir_okay=False), default=None,
                     help="write to a file instead of stdout"),
    ]):
        f = opt(f)
    return f


def _build_physical(kappa, a_str, b_str, c_str, mass, hbar, bits):
    try:
        return PotentialParams.create(
            A=a_str if a_str is not None else 0,
            B=b_str if b_str is not None else 0,
            C=c_str if c_str is not None else 0,
            kappa=kappa,
            m=mass if mass is not None else 1,
            hbar=hbar if hbar is not None else 1,
            precision_bits=bits,
        )
    except (AimSolveError, ValueError) as exc:
        _fail(str(exc))


def _resolve_inputs(kappa, reduced, a_tilde, gamma, a_str, b_str, c_str,
                    mass, hbar, bits):
    """Physical vs reduced parameter groups are mutually exclusive."""
    physical_given = any(v is not None for v in (a_str, b_str, c_str, mass, hbar))
    if reduced:
        if physical_given:
            _fail("--reduced conflicts with physical parameters "
                  "(--A/--B/--C/--mass/--hbar)")
        if a_tilde is None or gamma is None:
            _fail("--reduced requires --a-tilde and --gamma")
        return None
    if a_tilde is not None or gamma is not None:
        _fail("--a-tilde/--gamma require --reduced")
    if b_str is None:
        _fail("physical mode requires --B > 0 (or use --reduced)")
    return _build_physical(kappa, a_str, b_str, c_str, mass, hbar, bits)


def _reduced_for(params, kappa, reduced_flag, a_tilde, gamma, l, bits):
    if reduced_flag:
        try:
            return ReducedParams.from_dimensionless(a_tilde, gamma, l, bits)
        except (AimSolveError, ValueError) as exc:
            _fail(str(exc))
    try:
        return reduce_params(params, l)
    except AimSolveError as exc:
        _fail(str(exc))


def _solve_one(task):
    """Worker body for one (n, l) state; returns a plain record dict."""
    (setup, params, n, k_max, tol, scan_lo, scan_hi, scan_step) = task
    rec = {
        "kappa": setup.kappa,
        "a_tilde": _num(setup.reduced.a_tilde),
        "gamma": _num(setup.reduced.gamma),
        "beta": _num(setup.beta),
        "n": n,
        "l": setup.reduced.l,
        "epsilon": None,
        "e_physical": None,
        "k_converged": None,
        "status": None,
    }
    try:
        res = solve_state(setup, n, k_max=k_max, tol=tol,
                          scan_range=(scan_lo, scan_hi), scan_step=scan_step)
    except BracketError:
        rec["status"] = "bracket-lost"
        return rec
    except PrecisionError:
        rec["status"] = "precision-exhausted"
        return rec
    rec["epsilon"] = _num(res.epsilon)
    rec["k_converged"] = res.k_converged
    rec["status"] = res.status
    if params is not None:
        rec["e_physical"] = _num(epsilon_to_energy(res.epsilon, params))
    return rec


SOLVE_KEYS = ("kappa", "a_tilde", "gamma", "beta", "n", "l", "epsilon",
              "e_physical", "k_converged", "status")
CONVERGE_KEYS = SOLVE_KEYS + ("trace",)


@click.group()
@click.version_option(package_name="aimsolve", prog_name="aim")
def main():
    """Bound-state solver for the potential A/r^2 - B/r + C r^kappa."""


@main.command()
@_potential_options
@_reduced_options
@click.option("--n", "n_spec", default="0", show_default=True,
              help="radial quantum numbers, e.g. 0..2 or 0,2")
@click.option("--l", "l_spec", default="0", show_default=True,
              help="orbital quantum numbers")
@click.option("--beta", default=None, help="convergence constant "
              "(default 0.5 for kappa=1, 1.0 for kappa=2)")
@click.option("--k-max", type=int, default=100, show_default=True)
@click.option("--tol", default="1e-9", show_default=True,
              help="convergence certificate: three consecutive levels agree")
@click.option("--scan-min", default=None, help="eps scan window lower edge")
@click.option("--scan-max", default=None, help="eps scan window upper edge")
@click.option("--scan-step", default=None, help="eps scan step")
@click.option("--workers", type=int, default=None,
              help="worker processes for independent states")
@_output_options
def solve(kappa, a_str, b_str, c_str, mass, hbar, precision_bits, reduced,
          a_tilde, gamma, n_spec, l_spec, beta, k_max, tol,
          scan_min, scan_max, scan_step, workers, fmt, out):
    """Converge eigenvalues for kappa in {1, 2} over (n, l) lists."""
    if kappa not in (1, 2):
        _fail(f"kappa={kappa} is exactly solvable; use `aim exact`")
    params = _resolve_inputs(kappa, reduced, a_tilde, gamma, a_str, b_str,
                             c_str, mass, hbar, precision_bits)
    n_list = parse_index_spec(n_spec)
    l_list = parse_index_spec(l_spec)
    bits = precision_bits
    tasks = []
    try:
        for l in l_list:
            red = _reduced_for(params, kappa, reduced, a_tilde, gamma, l, bits)
            setup = make_setup(red, kappa, beta)
            lo, hi = default_scan_range(setup, max(n_list), max(l_list))
            if scan_min is not None:
                lo = ExtReal(scan_min, bits)
            if scan_max is not None:
                hi = ExtReal(scan_max, bits)
            step = (ExtReal(scan_step, bits) if scan_step is not None
                    else (hi - lo) / 512)
            for n in n_list:
                tasks.append((setup, params, n, k_max, tol, lo, hi, step))
    except (AimSolveError, ValueError) as exc:
        _fail(str(exc))
    records = parallel_map(_solve_one, tasks,
                           workers if workers is not None else default_workers())
    records.sort(key=lambda r: (r["n"], r["l"]))
    _emit(records, SOLVE_KEYS, fmt, out)
    if any(r["status"] != STATUS_CONVERGED for r in records):
        sys.exit(EXIT_CONVERGENCE)


def _converge_one(task):
    (setup, params, n, k_min, k_max, k_step, tol) = task
    rec = {
        "kappa": setup.kappa,
        "a_tilde": _num(setup.reduced.a_tilde),
        "gamma": _num(setup.reduced.gamma),
        "beta": _num(setup.beta),
        "n": n,
        "l": setup.reduced.l,
        "epsilon": None,
        "e_physical": None,
        "k_converged": None,
        "status": None,
        "trace": None,
    }
    try:
        res = solve_state(setup, n, k_min=k_min, k_max=k_max, k_step=k_step,
                          tol=tol, full_trace=True)
    except BracketError:
        rec["status"] = "bracket-lost"
        return rec
    except PrecisionError:
        rec["status"] = "precision-exhausted"
        return rec
    rec["epsilon"] = _num(res.epsilon)
    rec["k_converged"] = res.k_converged
    rec["status"] = res.status
    rec["trace"] = [[k, _num(v)] for k, v in res.trace]
    if params is not None:
        rec["e_physical"] = _num(epsilon_to_energy(res.epsilon, params))
    return rec


@main.command()
@_potential_options
@_reduced_options
@click.option("--n", "n_spec", default="0", show_default=True)
@click.option("--l", "l_spec", default="0", show_default=True)
@click.option("--beta", multiple=True,
              help="convergence constant; repeat for a sweep")
@click.option("--k-min", type=int, default=20, show_default=True)
@click.option("--k-max", type=int, default=90, show_default=True)
@click.option("--k-step", type=int, default=10, show_default=True)
@click.option("--tol", default="1e-8", show_default=True)
@click.option("--workers", type=int, default=None)
@_output_options
def converge(kappa, a_str, b_str, c_str, mass, hbar, precision_bits, reduced,
             a_tilde, gamma, n_spec, l_spec, beta, k_min, k_max, k_step,
             tol, workers, fmt, out):
    """Per-level eigenvalue trace for a single state, per beta value."""
    if kappa not in (1, 2):
        _fail(f"kappa={kappa} is exactly solvable; use `aim exact`")
    n_list = parse_index_spec(n_spec)
    l_list = parse_index_spec(l_spec)
    if len(n_list) != 1 or len(l_list) != 1:
        _fail("converge tracks a single (n, l) state")
    n, l = n_list[0], l_list[0]
    params = _resolve_inputs(kappa, reduced, a_tilde, gamma, a_str, b_str,
                             c_str, mass, hbar, precision_bits)
    betas = list(beta) if beta else [None]
    tasks = []
    try:
        red = _reduced_for(params, kappa, reduced, a_tilde, gamma, l,
                           precision_bits)
        for b in betas:
            setup = make_setup(red, kappa, b)
            tasks.append((setup, params, n, k_min, k_max, k_step, tol))
    except (AimSolveError, ValueError) as exc:
        _fail(str(exc))
    records = parallel_map(_converge_one, tasks,
                           workers if workers is not None else default_workers())
    records.sort(key=lambda r: (r["beta"] if r["beta"] is not None else 0.0))
    _emit(records, CONVERGE_KEYS, fmt, out, list_keys=("trace",))
    if any(r["status"] != STATUS_CONVERGED for r in records):
        sys.exit(EXIT_CONVERGENCE)


EXACT_KEYS = ("kappa", "n", "l", "e_physical", "lambda_cf", "eps_cf", "status")


@main.command()
@_potential_options
@click.option("--n", "n_spec", default="0", show_default=True)
@click.option("--l", "l_spec", default="0", show_default=True)
@click.option("--wavefunction", "want_wf", is_flag=True,
              help="emit sampled eigenfunction instead of energies")
@click.option("--grid-min", default="0.01", show_default=True)
@click.option("--grid-max", default=None,
              help="r grid upper edge (default from the decay rate)")
@click.option("--grid-points", type=int, default=512, show_default=True)
@_output_options
def exact(kappa, a_str, b_str, c_str, mass, hbar, precision_bits, n_spec,
          l_spec, want_wf, grid_min, grid_max, grid_points, fmt, out):
    """Closed-form energies/eigenfunctions for kappa in {0, -1, -2}."""
    if kappa not in (0, -1, -2):
        _fail(f"kappa={kappa} has no closed form; use `aim solve`")
    params = _build_physical(kappa, a_str, b_str, c_str, mass, hbar,
                             precision_bits)
    n_list = parse_index_spec(n_spec)
    l_list = parse_index_spec(l_spec)
    try:
        if want_wf:
            if len(n_list) != 1 or len(l_list) != 1:
                _fail("--wavefunction exports a single (n, l) state")
            n, l = n_list[0], l_list[0]
            cf = closed_form(params, n, l)
            hi = (float(grid_max) if grid_max is not None
                  else 38.0 / float(cf.eps_cf))
            import numpy as np
            grid = np.linspace(float(grid_min), hi, grid_points)
            wf = exact_wavefunction(params, n, l, grid)
            _emit_samples(params.kappa, n, l, _num(cf.energy), wf, fmt, out)
            return
        records = []
        for n in n_list:
            for l in l_list:
                cf = closed_form(params, n, l)
                records.append({
                    "kappa": kappa,
                    "n": n,
                    "l": l,
                    "e_physical": _num(cf.energy),
                    "lambda_cf": _num(cf.lambda_cf),
                    "eps_cf": _num(cf.eps_cf),
                    "status": "exact",
                })
    except (AimSolveError, ValueError) as exc:
        _fail(str(exc))
    records.sort(key=lambda r: (r["n"], r["l"]))
    _emit(records, EXACT_KEYS, fmt, out)


def _emit_samples(kappa, n, l, energy, wf, fmt, out):
    if fmt == "json":
        payload = {
            "kappa": kappa,
            "n": n,
            "l": l,
            "energy": energy,
            "samples": [[_num(r), _num(v)] for r, v in zip(wf.r, wf.values)],
            "node_count": wf.node_count,
        }
        text = json.dumps(payload, indent=2) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["r", "R"])
        for r, v in zip(wf.r, wf.values):
            writer.writerow([_num(r), _num(v)])
        text = buf.getvalue()
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


@main.command()
@click.argument("table_id", type=int)
@click.option("--precision-bits", type=int, default=DEFAULT_PRECISION_BITS,
              envvar="AIM_PRECISION_BITS", show_default=True)
@click.option("--workers", type=int, default=None)
@click.option("--format", "fmt", type=click.Choice(["text", "json", "csv"]),
              default="text", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def table(table_id, precision_bits, workers, fmt, out):
    """Reproduce a bundled benchmark table and report per-cell deltas."""
    if table_id not in TABLE_IDS:
        _fail(f"unknown table {table_id}; valid ids are 1..5")
    report = run_table(table_id, precision_bits,
                       workers if workers is not None else default_workers())
    if fmt == "json":
        payload = {
            "table": report.table_id,
            "tolerance": report.tolerance,
            "tolerance_kind": report.tolerance_kind,
            "passed": report.passed,
            "cells": [
                {
                    "label": c.label,
                    "computed": _num(c.computed),
                    "reference": _num(c.reference),
                    "delta": float(f"{c.delta:.3e}"),
                    "within": c.within,
                }
                for c in report.cells
            ],
        }
        text = json.dumps(payload, indent=2) + "\n"
    elif fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["label", "computed", "reference", "delta", "within"])
        for c in report.cells:
            writer.writerow([c.label, _num(c.computed), _num(c.reference),
                             f"{c.delta:.3e}", c.within])
        text = buf.getvalue()
    else:
        lines = [
            f"table {report.table_id}  "
            f"(tolerance {report.tolerance:g} {report.tolerance_kind})",
            f"{'cell':<28} {'computed':>16} {'reference':>16} "
            f"{'|delta|':>10}  ok",
        ]
        for c in report.cells:
            lines.append(
                f"{c.label:<28} {c.computed:>16.10g} {c.reference:>16.10g} "
                f"{c.delta:>10.2e}  {'yes' if c.within else 'NO'}"
            )
        lines.append(f"result: {'PASS' if report.passed else 'FAIL'}")
        text = "\n".join(lines) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)
    if not report.passed:
        sys.exit(EXIT_MISMATCH)


@main.command("wavefunction")
@_potential_options
@_reduced_options
@click.option("--n", "n_spec", default="0", show_default=True)
@click.option("--l", "l_spec", default="0", show_default=True)
@click.option("--beta", default=None)
@click.option("--k-max", type=int, default=100, show_default=True)
@click.option("--tol", default="1e-9", show_default=True)
@click.option("--grid-min", default=None, help="u grid lower edge")
@click.option("--grid-max", default=None, help="u grid upper edge")
@click.option("--grid-points", type=int, default=512, show_default=True)
@_output_options
def wavefunction_cmd(kappa, a_str, b_str, c_str, mass, hbar, precision_bits,
                     reduced, a_tilde, gamma, n_spec, l_spec, beta, k_max,
                     tol, grid_min, grid_max, grid_points, fmt, out):
    """Converge one state (kappa 1 or 2) and export its radial function."""
    if kappa not in (1, 2):
        _fail(f"kappa={kappa} is exactly solvable; use `aim exact "
              "--wavefunction`")
    n_list = parse_index_spec(n_spec)
    l_list = parse_index_spec(l_spec)
    if len(n_list) != 1 or len(l_list) != 1:
        _fail("wavefunction exports a single (n, l) state")
    n, l = n_list[0], l_list[0]
    params = _resolve_inputs(kappa, reduced, a_tilde, gamma, a_str, b_str,
                             c_str, mass, hbar, precision_bits)
    try:
        red = _reduced_for(params, kappa, reduced, a_tilde, gamma, l,
                           precision_bits)
        setup = make_setup(red, kappa, beta)
        res = solve_state(setup, n, k_max=k_max, tol=tol)
        if res.status != STATUS_CONVERGED:
            click.echo(f"state did not converge (status {res.status})",
                       err=True)
            sys.exit(EXIT_CONVERGENCE)
        level = res.k_converged if res.k_converged is not None else k_max
        level = max(level, n + 2)
        u0 = float(setup.u0)
        lo = float(grid_min) if grid_min is not None else 0.02 * u0
        hi = (float(grid_max) if grid_max is not None
              else _default_u_max(setup, res.epsilon))
        import numpy as np
        grid = np.linspace(lo, hi, grid_points)
        wf = aim_wavefunction(setup, res.epsilon, level, grid)
    except (AimSolveError, ValueError) as exc:
        _fail(str(exc))
    _emit_samples(kappa, n, l, _num(res.epsilon), wf, fmt, out)


def _default_u_max(setup, epsilon):
    """1.6x the outer turning point of the u-space profile."""
    eps = float(epsilon)
    g2 = float(setup.reduced.gamma) ** 2
    u = float(setup.u0)
    for _ in range(400):
        if 4 * eps * u * u + 4 - 4 * g2 * u ** (2 * setup.kappa + 2) < 0:
            return 1.6 * u
        u *= 1.02
    return 1.6 * u


ORACLE_KEYS = ("kappa", "n", "l", "e_oracle", "compared_to", "abs_delta",
               "rel_delta", "passed")


@main.command()
@_potential_options
@click.option("--n", "n_spec", default="0", show_default=True)
@click.option("--l", "l_spec", default="0", show_default=True)
@click.option("--r-min", default=None, help="grid start (default heuristic)")
@click.option("--r-max", default=None, help="grid end (default heuristic)")
@click.option("--grid-points", type=int, default=None)
@click.option("--e-min", default=None, help="energy window lower edge")
@click.option("--e-max", default=None, help="energy window upper edge")
@click.option("--compare-to", default=None,
              help="reference energy to cross-check against")
@click.option("--rel-tol", default="1e-5", show_default=True)
@click.option("--abs-tol", default="1e-8", show_default=True)
@click.option("--verify-resolution", is_flag=True,
              help="re-run on a doubled grid and warn if the value shifts")
@_output_options
def oracle(kappa, a_str, b_str, c_str, mass, hbar, precision_bits, n_spec,
           l_spec, r_min, r_max, grid_points, e_min, e_max, compare_to,
           rel_tol, abs_tol, verify_resolution, fmt, out):
    """Finite-difference eigenvalue, independent of the iteration engine."""
    params = _build_physical(kappa, a_str, b_str, c_str, mass, hbar,
                             precision_bits)
    n_list = parse_index_spec(n_spec)
    l_list = parse_index_spec(l_spec)
    records = []
    mismatch = False
    try:
        for n in n_list:
            for l in l_list:
                grid = suggest_grid(params, n, l)
                grid = GridSpec(
                    r_min=float(r_min) if r_min is not None else grid.r_min,
                    r_max=float(r_max) if r_max is not None else grid.r_max,
                    points=grid_points if grid_points is not None else grid.points,
                )
                energy = numerov_eigenvalue(
                    params, n, l, grid,
                    float(e_min) if e_min is not None else None,
                    float(e_max) if e_max is not None else None,
                    verify_resolution=verify_resolution,
                )
                rec = {
                    "kappa": kappa,
                    "n": n,
                    "l": l,
                    "e_oracle": _num(energy),
                    "compared_to": None,
                    "abs_delta": None,
                    "rel_delta": None,
                    "passed": None,
                }
                if compare_to is not None:
                    report = compare(float(compare_to), energy,
                                     float(rel_tol), float(abs_tol))
                    rec["compared_to"] = _num(report.e_candidate)
                    rec["abs_delta"] = float(f"{report.abs_delta:.6e}")
                    rec["rel_delta"] = float(f"{report.rel_delta:.6e}")
                    rec["passed"] = report.passed
                    mismatch = mismatch or not report.passed
                records.append(rec)
    except (AimSolveError, ValueError) as exc:
        _fail(str(exc))
    records.sort(key=lambda r: (r["n"], r["l"]))
    _emit(records, ORACLE_KEYS, fmt, out)
    if mismatch:
        sys.exit(EXIT_MISMATCH)


if __name__ == "__main__":
    main()
