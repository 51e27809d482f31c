"""Exception types shared by the algebra, counting and CLI layers."""


class AlgebraError(Exception):
    """Base class for every error raised by this project."""


class FieldError(AlgebraError, ValueError):
    """Invalid finite field parameters."""


class FieldMismatchError(FieldError):
    """Operands live in different field contexts."""


class PolynomialError(AlgebraError, ValueError):
    """Invalid polynomial input (empty tuple, all zero, not monic...)."""


class PolynomialDivisionError(PolynomialError, ZeroDivisionError):
    """Division by the zero polynomial or inversion of zero."""


class ParameterError(AlgebraError, ValueError):
    """A numeric parameter outside its allowed range (negative degree, weight < 1...)."""


class SignatureError(AlgebraError, ValueError):
    """A Euclidean signature that no run of the algorithm can produce."""


class EnumerationCapError(AlgebraError):
    """The projected enumeration size exceeds the configured cap."""

    def __init__(self, projected: int, cap: int, what: str = "enumeration"):
        super().__init__(f"{what} needs {projected:,} evaluations, cap is {cap:,}")
        self.projected = projected
        self.cap = cap
        self.what = what


class HypothesisError(AlgebraError):
    """The characteristic divides one of the weights and no override was given."""


class VerificationError(AlgebraError, AssertionError):
    """An identity that must hold exactly did not."""


class UsageError(ParameterError):
    """Command-line parameters do not fit the chosen command."""
