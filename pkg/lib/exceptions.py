class RealDimError(Exception):
    """Base exception for all errors raised by this package."""


class RingMismatchError(RealDimError, ValueError):
    """Raised when combining polynomials that live in different rings"""

class VariableError(RealDimError, ValueError):
    """Raised for an out-of-range variable index or an invalid substitution"""


class ProblemSyntaxError(RealDimError, ValueError):
    """Raised when a problem file or polynomial expression cannot be parsed.
    :ivar int line: 1-based line of the offending token, or 0 when unknown
    :ivar int column: 1-based column of the offending token, or 0 when unknown
    """

    def __init__(self, message: str, line: int = 0, column: int = 0):
        if line:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)
        self.line = line
        self.column = column

class UndeclaredVariableError(ProblemSyntaxError):
    """Raised when an expression uses an identifier missing from `vars:`"""

class EmptySystemError(ProblemSyntaxError):
    """Raised when a problem file declares no polynomials"""


class RootOnEndpointError(RealDimError, ValueError):
    """Raised when a Sturm count is requested on an interval whose endpoint is a root"""


class GenericityExhaustedError(RealDimError, RuntimeError):
    """Raised when every generic choice within the retry budget turned out to be degenerate"""

    def __init__(self, what: str, attempts: int):
        super().__init__(f"Genericity retry budget exhausted after {attempts} attempts: {what}")
        self.what = what
        self.attempts = attempts


class NotBivariateError(RealDimError, ValueError):
    """Raised when the plane oracle receives a polynomial outside a 2-variable ring"""

class OracleUndecidedError(RealDimError):
    """Raised when the plane oracle cannot decide whether a candidate point is real"""


class UsageError(RealDimError):
    """Raised when the command line cannot be parsed"""
