"""Exception hierarchy shared across the package.

Validation problems subclass ``ValueError`` and numerical failures subclass
``NumericalError``; the CLI maps the two families to distinct exit codes.
"""


class SuperradianceError(Exception):
    """Base class for all package errors."""


class ValidationError(SuperradianceError, ValueError):
    """Invalid geometry, polarization or run parameters."""


class SingularDisplacementError(ValidationError):
    """The full (coherent) propagator was requested at zero displacement."""


class SizeLimitError(ValidationError):
    """Requested array exceeds a configured atom-count cap."""


class FitError(ValidationError):
    """Not enough data for the requested least-squares model."""


class NumericalError(SuperradianceError, ArithmeticError):
    """A numerical routine failed to produce a trustworthy value."""


class DivergenceError(NumericalError):
    """Evaluation point lies on a light-cone singularity."""


class ConvergenceError(NumericalError):
    """An iterative solver or quadrature did not converge."""
