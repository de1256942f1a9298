"""Multiobjective accelerated gradient toolkit.

Python bindings for the C++ core: the MAG-GM accelerated method with
generalized momentum, the multiobjective steepest-descent baseline, the
inertial dynamical-system simulator, the simplex subproblem solvers and the
convergence diagnostics.
"""

from ._core import (
    DataError,
    InsufficientDataError,
    ObjectiveBundle,
    SolverError,
    UnsupportedError,
    brute_force_subproblem,
    check_gradients,
    criticality_residual,
    emit_report,
    evaluate,
    integrate_mavd,
    make_jos1,
    make_quadratic_ensemble,
    merit_surrogate,
    min_norm_element,
    pareto_reference,
    parse_config_echo,
    project_hull,
    project_simplex,
    rate_fit,
    run_mag_gm,
    run_msd,
    run_plan_from_text,
    sigma,
    solve_subproblem,
)

__all__ = [
    "DataError",
    "InsufficientDataError",
    "ObjectiveBundle",
    "SolverError",
    "UnsupportedError",
    "brute_force_subproblem",
    "check_gradients",
    "criticality_residual",
    "emit_report",
    "evaluate",
    "integrate_mavd",
    "make_jos1",
    "make_quadratic_ensemble",
    "merit_surrogate",
    "min_norm_element",
    "pareto_reference",
    "parse_config_echo",
    "project_hull",
    "project_simplex",
    "rate_fit",
    "run_mag_gm",
    "run_msd",
    "run_plan_from_text",
    "sigma",
    "solve_subproblem",
]

__version__ = "0.1.0"
