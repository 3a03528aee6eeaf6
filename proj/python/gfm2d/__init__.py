"""2D variable-coefficient Poisson solver with interface jumps."""

from ._gfm2d import (
    Grid,
    builtin_case_names,
    convergence_study,
    max_error_vs_exact,
    run_structural_battery,
    solve_case,
)

__all__ = [
    "Grid",
    "builtin_case_names",
    "convergence_study",
    "max_error_vs_exact",
    "run_structural_battery",
    "solve_case",
]
