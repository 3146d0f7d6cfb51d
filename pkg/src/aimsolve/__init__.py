"""High-precision bound states of V(r) = A/r^2 - B/r + C r^kappa.

Iterative eigenvalues for kappa in {1, 2}, closed forms for {0, -1, -2},
and an independent finite-difference oracle.
"""

from .algebra import DEFAULT_PRECISION_BITS, MIN_PRECISION_BITS, ExtReal, LaurentPoly
from .closedform import (
    ClosedForm,
    closed_form,
    exact_energy,
    exact_wavefunction,
    kummer_terminating,
)
from .engine import (
    AimPair,
    EigenResult,
    STATUS_CONVERGED,
    STATUS_MAX_ITERATIONS,
    STATUS_OSCILLATING,
    aim_step,
    converge,
    delta,
    refine_root,
    residual,
    scan_roots,
    solve_state,
    wavefunction,
)
from .errors import (
    AimSolveError,
    BracketError,
    DomainError,
    KappaRangeError,
    PivotError,
    PrecisionError,
    ResolutionWarning,
    ScalingError,
    SingularIntegrandError,
    WindowError,
)
from .numerov import (
    ComparisonReport,
    GridSpec,
    compare,
    count_nodes,
    numerov_eigenvalue,
    suggest_grid,
)
from .problems import (
    PotentialParams,
    ProblemSetup,
    ReducedParams,
    default_beta,
    energy_to_epsilon,
    epsilon_to_energy,
    make_setup,
    reduce_params,
)
from .radial import RadialWavefunction
from .reference import TableCell, TableReport, run_table

__version__ = "1.0.0"

__all__ = [
    "AimPair",
    "AimSolveError",
    "BracketError",
    "ClosedForm",
    "ComparisonReport",
    "DEFAULT_PRECISION_BITS",
    "DomainError",
    "EigenResult",
    "ExtReal",
    "GridSpec",
    "KappaRangeError",
    "LaurentPoly",
    "MIN_PRECISION_BITS",
    "PivotError",
    "PotentialParams",
    "PrecisionError",
    "ProblemSetup",
    "RadialWavefunction",
    "ReducedParams",
    "ResolutionWarning",
    "STATUS_CONVERGED",
    "STATUS_MAX_ITERATIONS",
    "STATUS_OSCILLATING",
    "ScalingError",
    "SingularIntegrandError",
    "TableCell",
    "TableReport",
    "WindowError",
    "aim_step",
    "closed_form",
    "compare",
    "converge",
    "count_nodes",
    "default_beta",
    "delta",
    "energy_to_epsilon",
    "epsilon_to_energy",
    "exact_energy",
    "exact_wavefunction",
    "kummer_terminating",
    "make_setup",
    "numerov_eigenvalue",
    "reduce_params",
    "refine_root",
    "residual",
    "run_table",
    "scan_roots",
    "solve_state",
    "suggest_grid",
    "wavefunction",
]
