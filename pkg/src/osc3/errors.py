"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class InvalidStateError(ValueError):
    """Kernel coefficients do not describe a valid (positive, normalizable) state."""


class IntegrationError(RuntimeError):
    """The Ermakov ODE integration failed (e.g. the scale factor collapsed)."""


class GridError(RuntimeError):
    """A quadrature grid is too coarse or too narrow for the kernel under test."""


class ConfigError(ValueError):
    """A scenario configuration is malformed."""


class NumericalError(ArithmeticError):
    """A linear-algebra step is too ill-conditioned to trust."""
