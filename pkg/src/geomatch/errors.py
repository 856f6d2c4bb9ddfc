"""Exception types raised across the package."""


class GeomatchError(Exception):
    """Base class for all package errors."""


class EmptyPiercing(GeomatchError):
    """An object contains no integer grid point."""


class SeparatorNotFound(GeomatchError):
    """No circle met the size/balance requirements within the retry budget."""


class ZeroPivot(GeomatchError):
    """Elimination without pivoting met a zero on the diagonal."""

    def __init__(self, index: int, message: str | None = None):
        self.index = index
        super().__init__(message or f"zero pivot at index {index}")


class RankMismatch(GeomatchError):
    """A zero pivot whose remaining row or column is not null.

    Signals an unlucky random substitution; retry with a fresh seed.
    """

    def __init__(self, index: int):
        self.index = index
        super().__init__(f"zero pivot at index {index} with a non-null row/column")


class Singular(GeomatchError):
    """A matrix expected to be nonsingular turned out singular."""


class InconsistentOrder(GeomatchError):
    """Row order or sparsity pattern does not respect the separator tree."""


class InvalidMatching(GeomatchError):
    """A matching uses a non-edge or covers a vertex twice."""


class RetryExhausted(GeomatchError):
    """The randomized pipeline failed on every allowed restart."""


class TooLarge(GeomatchError):
    """Input exceeds the size limit of an exhaustive routine."""


class GenerationFailed(GeomatchError):
    """Instance generator could not satisfy its constraints."""


class PointNotInterior(GeomatchError):
    """The reference point is not strictly inside every disk of the family."""


class StructureMismatch(GeomatchError):
    """A query structure was asked to store objects it does not support."""
