"""Exception hierarchy shared by every module of the package."""


class CaterpillarError(Exception):
    """Base class for all errors raised by :mod:`caterpillars`."""

    code = "CaterpillarError"


class SizeTooSmall(CaterpillarError, ValueError):
    code = "SizeTooSmall"


class CapExceeded(CaterpillarError, ValueError):
    code = "CapExceeded"


class NoConvergence(CaterpillarError, ArithmeticError):
    code = "NoConvergence"


class KTooLargeForTruncation(CaterpillarError, ValueError):
    """The truncated-series procedure cannot separate ``W_k`` from ``W`` when ``k >= m``.

    The first ``k`` coefficients of the size-capped series coincide with the
    unconstrained Wedderburn-Etherington series, so with only ``m <= k`` terms
    the numerical singularity is indistinguishable from the unconstrained one.
    """

    code = "KTooLargeForTruncation"


class NotAv132(CaterpillarError, ValueError):
    """Raised when a permutation contains the pattern 132.

    ``witness`` holds 1-based positions ``(i, j, k)`` of one occurrence.
    """

    code = "NotAv132"

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ParseError(CaterpillarError, ValueError):
    """Malformed Newick input. ``offset`` is the byte offset of the problem."""

    code = "ParseError"

    def __init__(self, message, offset, expected=None):
        self.offset = offset
        self.expected = expected
        detail = f"{message} at offset {offset}"
        if expected:
            detail += f" (expected {expected})"
        super().__init__(detail)


class NameCountMismatch(CaterpillarError, ValueError):
    code = "NameCountMismatch"


class IndexOutOfRange(CaterpillarError, IndexError):
    code = "IndexOutOfRange"
