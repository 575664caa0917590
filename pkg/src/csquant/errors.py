"""Exception and warning types raised by csquant."""


class CSQuantError(Exception):
    """Base class for all csquant errors."""


class InvalidParameterError(CSQuantError, ValueError):
    pass


class DegeneratePointError(CSQuantError, ValueError):
    """Raised for well phase-space points on the walls, where the CS vanish."""


class QuadratureError(CSQuantError, ArithmeticError):
    """Adaptive quadrature did not reach the requested accuracy.

    The achieved error estimate is available as ``achieved``.
    """

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class StructureError(CSQuantError, ValueError):
    """Operator does not have the structure a solver requires."""


class ShapeMismatchError(CSQuantError, ValueError):
    pass


class NumericalConsistencyError(CSQuantError, ArithmeticError):
    pass


class TruncationWarning(UserWarning):
    """A coherent-state window does not fit in the truncated basis.

    ``tail_bound`` carries an upper bound on the discarded weight.
    """

    def __init__(self, message, tail_bound=None):
        super().__init__(message)
        self.tail_bound = tail_bound


class ClampWarning(UserWarning):
    """A dispersion radicand was slightly negative and clamped to zero."""
