"""Exception hierarchy.

Every numerical failure mode gets its own class so callers (and the CLI) can
tell a theory failure from a conditioning failure.
"""


class SymTwistorError(ValueError):
    """Base class for all errors raised by the package."""


class InvalidDimensionError(SymTwistorError):
    pass


class InvalidIndexError(SymTwistorError):
    pass


class DimensionMismatchError(SymTwistorError):
    pass


class DegeneracyError(SymTwistorError):
    """A pivot or denominator is numerically zero."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class CompatibilityError(SymTwistorError):
    """A complex structure is not compatible with the symplectic form."""


class IndeterminateSignatureError(SymTwistorError):
    """An eigenvalue fell inside the rank-decision band around zero."""

    def __init__(self, message, eigenvalues=None):
        super().__init__(message)
        self.eigenvalues = eigenvalues


class RankDecisionError(SymTwistorError):
    """Singular values show no clear spectral gap at the threshold."""

    def __init__(self, message, singular_values=None):
        super().__init__(message)
        self.singular_values = singular_values


class DomainError(SymTwistorError):
    """A point lies outside the domain of an operation."""


class SingularDenominatorError(SymTwistorError):
    """cz+d (or another block) is numerically singular."""


class NotSymplecticError(SymTwistorError):
    pass


class NotRealLagrangianError(SymTwistorError):
    pass


class RealityError(SymTwistorError):
    """A matrix that should be real carries a non-negligible imaginary part."""


class NonUnitaryError(SymTwistorError):
    pass


class UnknownSuiteError(SymTwistorError):
    pass
