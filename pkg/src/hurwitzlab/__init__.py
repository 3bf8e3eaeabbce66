"""Desk-scale laboratory for the value distribution of the Hurwitz zeta
function with quadratic irrational parameter: exact real-quadratic-field
arithmetic, the associated unit-circle random model, time-average numerics,
and the extremal-function approximation toolkit."""

from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "__version__"]
