"""Exception types shared across the library."""


class ZetaquantError(Exception):
    """Base class for all library errors."""


class RangeOverflowError(ZetaquantError):
    """An exponential left the representable double range."""


class PoleZeroError(ZetaquantError):
    """Evaluation hit a pole, or a determinant factor is identically zero.

    Carries the offending index when one exists.
    """

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class ConstructionError(ZetaquantError):
    """Invalid input to a type constructor (zero entries, bad multiplicity, ...)."""


class DomainError(ZetaquantError):
    """A precondition on the mathematical domain was violated."""


class CertificationError(ZetaquantError):
    """Requested result cannot be certified under the declared tail model."""


class ConsistencyError(ZetaquantError):
    """Two internal evaluation routes disagree beyond tolerance."""


class RecognitionError(ZetaquantError):
    """A power series could not be recognized as the expected rational function."""


class ParseError(ZetaquantError):
    """Malformed input file; carries the 1-based line number."""

    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line
