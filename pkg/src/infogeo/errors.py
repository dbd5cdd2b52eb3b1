"""Exception types shared across the library.

Every error raised deliberately by this package derives from
:class:`InfoGeoError`, so callers can distinguish library-level failures
(domain violations, solver breakdowns, structural degeneracies) from
programming errors such as ``TypeError`` or ``ValueError``.
"""


class InfoGeoError(Exception):
    """Base class for all library errors."""


class DomainError(InfoGeoError):
    """A point lies outside the open domain an operation requires."""


class EvaluationError(InfoGeoError):
    """A function could not be evaluated (non-finite value or singular spectrum)."""


class ConvergenceError(InfoGeoError):
    """An iterative solver stopped before reaching its tolerance.

    The best iterate found is attached as ``result`` when available.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class DegeneracyError(InfoGeoError):
    """A rank or positive-definiteness requirement is violated."""


class CanonicalityError(InfoGeoError):
    """The Legendre identity residual exceeded its tolerance.

    Carries the offending ``pair`` (a :class:`~infogeo.core.DualPair`).
    """

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class UnsupportedOperationError(InfoGeoError):
    """The model does not provide the layer needed by this operation."""


class ConstraintError(InfoGeoError):
    """A structural precondition (for example fiber membership) does not hold."""


class SupportError(InfoGeoError):
    """Absolute-continuity violation between distributions."""


class InfeasibleError(InfoGeoError):
    """Requested moments lie outside the feasible region."""


class TruncationError(InfoGeoError):
    """Basis truncation too small for the requested state."""
