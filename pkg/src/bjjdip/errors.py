"""Exception hierarchy shared by the simulator modules."""


class BJJDipError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(BJJDipError, ValueError):
    """A physical or dimensionless parameter is outside its domain."""


class ShapeError(BJJDipError):
    """The potential does not have the expected double-well shape."""


class NumericError(BJJDipError, ArithmeticError):
    """A numerical routine failed to converge.

    ``index`` identifies the offending eigenvalue level (or sweep row) when
    one is known.
    """

    def __init__(self, message, index=None, i0=None):
        super().__init__(message)
        self.index = index
        self.i0 = i0


class SelectionError(BJJDipError):
    """A tunneling doublet could not be identified unambiguously."""


class DomainError(BJJDipError, ValueError):
    """An argument lies outside the domain of a closed-form expression."""


class SingularityError(DomainError):
    """The junction equations diverge at |z| = 1."""


class DegenerateParametersError(BJJDipError, ValueError):
    """Junction parameters for which the requested object is undefined."""


class InconclusiveError(BJJDipError):
    """A trajectory is too short to be classified."""
