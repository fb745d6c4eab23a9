"""Exception types shared across the package."""


class QhosvdError(Exception):
    """Base class for all package-specific errors."""


class ShapeError(QhosvdError, ValueError):
    """Operands have incompatible or invalid dimensions."""


class ModeError(QhosvdError, ValueError):
    """A mode index is outside 1..N."""


class DataError(QhosvdError, ValueError):
    """Input data is unusable (non-finite entries, bad domain)."""


class RankSpecError(QhosvdError, ValueError):
    """A truncation spec does not resolve to valid per-mode ranks."""


class ConvergenceError(QhosvdError, RuntimeError):
    """The SVD backend failed to converge.

    Carries the achieved off-diagonal residual when known.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class TensorFormatError(QhosvdError, ValueError):
    """A serialized tensor file cannot be parsed."""


class BadMagicError(TensorFormatError):
    """The file does not start with the expected magic bytes."""


class TruncatedPayloadError(TensorFormatError):
    """The file ends before the payload implied by its header."""
