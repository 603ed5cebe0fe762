"""Exception types shared across the package."""


class SingularPointError(ValueError):
    """Evaluation requested exactly at a power-singularity center."""


class NonIntegrableError(ValueError):
    """An integrand has a singularity outside the admissible exponent range."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance."""


class PropagationError(RuntimeError):
    """The ODE propagator could not meet its tolerance within the step budget."""


class PrecisionError(ValueError):
    """Not enough working precision for the requested number of convergents."""


class DeskScaleError(OverflowError):
    """A period or exponent exceeds what can be handled numerically."""
