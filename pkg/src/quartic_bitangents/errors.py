"""Exception hierarchy.

The CLI maps these onto exit codes: input problems exit 2, resolution or
precision problems exit 3, verification assertion failures exit 1.
"""


class QuarticError(Exception):
    """Base class for all package errors."""


class InputError(QuarticError):
    """Malformed or rejected input (exit code 2)."""


class SchemaError(InputError):
    pass


class ParseError(InputError):
    pass


class UnsupportedInputError(InputError):
    """Input is well-formed but violates a hypothesis (e.g. non-smooth)."""


class ResolutionError(QuarticError):
    """Sampling resolution insufficient to resolve the geometry (exit 3)."""


class PrecisionError(QuarticError):
    """Numeric precision insufficient for a sign decision (exit 3)."""


class DegeneracyError(QuarticError):
    """Bitangent solving hit a degenerate configuration (exit 3)."""


class ConditioningError(QuarticError):
    """Realized quartic too close to singular at working precision."""


class EstimationError(QuarticError):
    """Valuation slope estimation did not land on an admissible rational."""


class TrackingError(QuarticError):
    """Continuation lost or confused a root between schedule points."""


class AmbiguityError(QuarticError):
    """A query point matched more than one tropical bitangent class."""

    def __init__(self, message, candidates=()):
        super().__init__(message)
        self.candidates = tuple(candidates)


class IsolationError(QuarticError):
    """No avoiding samples found near a bitangent at any probe radius."""


class UniquenessError(QuarticError):
    """Two distinct component labels persisted where one was required."""


class InternalConsistencyError(QuarticError):
    """A structural fact the theory guarantees failed to hold."""


class VerificationFailure(QuarticError):
    """A verification assertion failed (exit code 1)."""
