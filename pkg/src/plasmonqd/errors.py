"""Exception hierarchy.

Configuration problems derive from :class:`ConfigError`; anything raised by
the numerical kernels or the physical model derives from
:class:`NumericalError`. The CLI maps these onto exit codes 2 and 3.
"""


class PlasmonQDError(Exception):
    pass


class ConfigError(PlasmonQDError, ValueError):
    def __init__(self, message, line=None, key=None):
        self.line = line
        self.key = key
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class NumericalError(PlasmonQDError):
    pass


class NonHermitianError(NumericalError, ValueError):
    pass


class NotPSDError(NumericalError, ValueError):
    pass


class ConvergenceError(NumericalError):
    def __init__(self, message, residual=None):
        self.residual = residual
        super().__init__(message)


class SingularMatrixError(NumericalError):
    pass


class StiffnessError(NumericalError):
    def __init__(self, message, t=None, step=None):
        self.t = t
        self.step = step
        super().__init__(message)


class BesselPoleError(NumericalError):
    pass


class DomainError(NumericalError, ValueError):
    """Input outside the physical domain of a formula."""


class GeometryError(DomainError):
    pass
