"""Exception hierarchy shared across the package."""


class ResovarError(Exception):
    """Base class for all errors raised by this package."""


class NonSquareError(ResovarError):
    """A square matrix was required."""


class ShapeMismatchError(ResovarError):
    """Dimensions of the supplied objects do not line up."""


class NotFlatError(ResovarError):
    """The connection does not satisfy the Maurer-Cartan equation."""


class DependentBasisError(ResovarError):
    """A linearly independent family was required."""


class TooLargeError(ResovarError):
    """Subset enumeration would exceed the configured vertex cap."""


class BudgetExceededError(ResovarError):
    """An exhaustive search would exceed its point budget."""


class IncompleteSpectrumError(ResovarError):
    """A complete rational spectrum was required but irrational eigenvalues are present."""


class NotNilpotentError(ResovarError):
    """A nilpotent Lie algebra was required."""


class NonNegativeEulerError(ResovarError):
    """Curve algebras require negative Euler characteristic."""


class InvalidFibrationError(ResovarError):
    """A fibration datum failed its embedding checks."""


class PreconditionUncertifiedError(ResovarError):
    """A semi-decidable precondition could not be certified within budget."""


class UnknownFixtureError(ResovarError):
    """No built-in fixture with the requested name."""
