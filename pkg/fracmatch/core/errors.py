"""Exception hierarchy shared by all modules."""

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from fracmatch.schemas.sweep import SweepSummary


class FracmatchError(Exception):
    """Base class for suite errors."""


class PreconditionError(FracmatchError):
    """An operation was called outside its documented domain."""


class CapExceededError(FracmatchError):
    """An instance is larger than the configured enumeration or LP cap."""

    def __init__(self, what: str, value: int, cap: int):
        super().__init__(f"{what}={value} exceeds cap {cap}")
        self.what = what
        self.value = value
        self.cap = cap


class IndeterminateComparisonError(FracmatchError):
    """A floating comparison fell inside the guard band around a threshold."""


class CheckpointMismatchError(FracmatchError):
    """A checkpoint belongs to a different sweep configuration."""


class CertificateError(FracmatchError):
    """A certificate produced by the solver failed exact re-verification."""


class ArithmeticFailure(FracmatchError):
    """An internal exact-arithmetic invariant broke."""


class SweepInterrupted(FracmatchError):
    """The sweep stopped early; the checkpoint is intact and resumable.

    ``summary`` holds the partial SweepSummary when the worker got that far.
    """

    def __init__(self, message: str, summary: "SweepSummary | None" = None):
        super().__init__(message)
        self.summary = summary
