"""Complexity-based wavefunction branching toolkit."""

from ._core import (
    ValidationError,
    classify_region,
    eth_sweep,
    estimate,
    example,
    haar_random_state,
    integrate_flow,
    objective_value,
    qec_residuals,
    run_cli,
    surface_rate,
    verdict,
)

__all__ = [
    "ValidationError",
    "classify_region",
    "eth_sweep",
    "estimate",
    "example",
    "haar_random_state",
    "integrate_flow",
    "objective_value",
    "qec_residuals",
    "run_cli",
    "surface_rate",
    "verdict",
]
