"""Point counts and paving checks for enhanced nilpotent orbit resolutions.

Bipartitions are passed as ``(mu, nu)`` pairs of non-increasing integer lists.
"""

from ._enpave import (
    bipartitions,
    classify_pair,
    closure_contains,
    count_fiber,
    fiber_count,
    fiber_polynomial,
    flag_shape,
    gaussian_binomial,
    is_distinguished,
    normal_pair,
    orbit_dimension,
    run_cli,
)

__all__ = [
    "bipartitions",
    "classify_pair",
    "closure_contains",
    "count_fiber",
    "fiber_count",
    "fiber_polynomial",
    "flag_shape",
    "gaussian_binomial",
    "is_distinguished",
    "normal_pair",
    "orbit_dimension",
    "run_cli",
]
