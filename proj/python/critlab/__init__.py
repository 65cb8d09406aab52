"""Numerical lab for renormalization of critical circle maps."""

import json as _json

from ._core import (
    BudgetError,
    ConvergenceError,
    DomainError,
    Error,
    InvariantError,
    Lift,
    NumericalError,
    OverflowError,
    ParameterError,
    Precision,
    cf_from_real,
    convergents,
    gamma_curve,
    julia_grid,
    parse_cf,
    real_from_cf,
    renorm_orbit,
    rotation_number,
    rotation_number_cf,
    solve_parameter,
    tongue_boundary,
)
from ._core import run_experiment as _run_experiment

__version__ = "0.1.0"


def run_experiment(config):
    """Run one lab command from a config dict and return the report dict."""
    return _json.loads(_run_experiment(_json.dumps(config)))


__all__ = [
    "BudgetError",
    "ConvergenceError",
    "DomainError",
    "Error",
    "InvariantError",
    "Lift",
    "NumericalError",
    "OverflowError",
    "ParameterError",
    "Precision",
    "cf_from_real",
    "convergents",
    "gamma_curve",
    "julia_grid",
    "parse_cf",
    "real_from_cf",
    "renorm_orbit",
    "rotation_number",
    "rotation_number_cf",
    "run_experiment",
    "solve_parameter",
    "tongue_boundary",
]
