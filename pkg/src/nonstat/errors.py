"""Exception types shared across the package.

The CLI maps these onto its exit-code contract: I/O and format problems
exit 2, precondition violations exit 3.
"""


class NonstatError(Exception):
    """Base class for all errors raised by this package."""


class AudioReadError(NonstatError):
    """File missing, unreadable, or structurally corrupt."""


class UnsupportedAudioError(NonstatError):
    """Readable container but a codec/layout we do not decode."""


class EmptyAudioError(NonstatError):
    """Audio file decodes to zero samples."""


class PreconditionError(NonstatError, ValueError):
    """An operation was called outside its documented domain."""


class DegenerateThetaWarning(UserWarning):
    """Surrogate variance population was (near-)constant; threshold fell back to 1."""
