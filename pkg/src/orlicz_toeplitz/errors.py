"""Exception types shared by every module of the package."""

from __future__ import annotations


class OrliczError(Exception):
    """Base class for all errors raised by :mod:`orlicz_toeplitz`."""

    #: short machine-readable tag, used by the command line front-end
    code = "error"

    def payload(self) -> dict:
        return {"error": self.code, "message": str(self)}


class DomainError(OrliczError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""

    code = "domain"


class RangeError(OrliczError, ValueError):
    """A value falls outside the numerically supported range.

    The offending value is kept in :attr:`value`.
    """

    code = "range"

    def __init__(self, message: str, value=None):
        super().__init__(message)
        self.value = value

    def payload(self) -> dict:
        out = super().payload()
        if self.value is not None:
            out["value"] = float(self.value)
        return out


class ConvergenceError(OrliczError, RuntimeError):
    code = "convergence"


class IndexDivergedError(OrliczError, RuntimeError):
    """The log-slope estimate of an index did not stabilise on the grid."""

    code = "index-diverged"


class DilationInfiniteError(OrliczError, RuntimeError):
    code = "dilation-infinite"


class IndicesOutOfRangeError(OrliczError, ValueError):
    """The indices violate ``1 < alpha <= beta < inf``."""

    code = "indices-out-of-range"


class DegenerateError(OrliczError, RuntimeError):
    """A constructed interpolation function failed its index check."""

    code = "phi-theta-degenerate"


class SizeGuardError(OrliczError, ValueError):
    """A truncation is too small for an identity check to be exact."""

    code = "size-guard"


class SymbolError(OrliczError, ValueError):
    code = "symbol"


class CoverError(OrliczError, ValueError):
    """Bump supports around the given points do not cover the circle."""

    code = "cover"
