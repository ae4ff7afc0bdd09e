class ScatteringError(Exception):
    """Base class for numerical failures raised by fixedscat."""


class SingularEvaluationError(ScatteringError, ValueError):
    """Point evaluation of a kernel on its diagonal."""


class ResonanceError(ScatteringError, ValueError):
    """Frequency on the characteristic set where the kernel symbol is singular."""


class DivergenceError(ScatteringError):
    """Born/Neumann iteration left its convergence regime."""


class NoCrossingError(ScatteringError):
    """Root bracket for the matching height could not be established."""

    def __init__(self, message, cap=None, value_at_cap=None):
        super().__init__(message)
        self.cap = cap
        self.value_at_cap = value_at_cap
