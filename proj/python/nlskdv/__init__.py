"""Solitary waves of the coupled NLS-KdV system.

Thin layer over the compiled core: constrained minimizers I(s, t) and W(s, t),
the integrating-factor evolution, rearrangements and the CLI workflows.
"""

from ._core import (
    IoError,
    NumericalError,
    Params,
    ValidationError,
    conserved,
    energy,
    evolve,
    grid_x,
    kdv_ground,
    minimize_I,
    minimize_W,
    nls_ground,
    rearrange,
    run,
    solitary_initial,
)

__all__ = [
    "IoError",
    "NumericalError",
    "Params",
    "ValidationError",
    "conserved",
    "energy",
    "evolve",
    "grid_x",
    "kdv_ground",
    "minimize_I",
    "minimize_W",
    "nls_ground",
    "rearrange",
    "run",
    "solitary_initial",
]

__version__ = "0.1.0"
