"""Exception types shared across the library."""


class MfelabError(Exception):
    """Base class for library-specific failures."""


class ConvergenceError(MfelabError):
    """Newton iteration stagnated. Carries the final residual pair."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals


class DivergenceError(MfelabError):
    """ODE state became non-finite. Carries the blow-up radius."""

    def __init__(self, message, radius=None):
        super().__init__(message)
        self.radius = radius


class PositivityError(MfelabError):
    """A quantity required to stay positive crossed zero."""


class ConstraintViolationError(MfelabError):
    """A converged solution violates a structural constraint."""


class DegeneracyError(MfelabError):
    """Numerical kernel of a mass matrix exceeds its declared bound."""


class ResolutionError(MfelabError):
    """Grid too coarse to resolve nodal structure. Carries the radius."""

    def __init__(self, message, radius=None):
        super().__init__(message)
        self.radius = radius


class DiagnosticError(MfelabError):
    """Finite-difference and equation-based classifications disagree."""


class PoorFitError(MfelabError):
    """Vanishing-order fit residual above threshold."""


class ConfigError(MfelabError):
    """Malformed or incomplete run configuration."""
