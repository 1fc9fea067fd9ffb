"""Numerical kernels: small Hermitian eigensolver, pivoted solve, DOPRI5, Bessel ratios."""

from .bessel import bessel_log_ratio, log_derivative
from .linalg import hermitian_eig, hermitian_sqrt, solve_linear
from .ode import OdeSolution, integrate_adaptive

__all__ = [
    "OdeSolution",
    "bessel_log_ratio",
    "hermitian_eig",
    "hermitian_sqrt",
    "integrate_adaptive",
    "log_derivative",
    "solve_linear",
]
