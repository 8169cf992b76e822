"""Exception hierarchy shared by every herencode module."""

from __future__ import annotations


class HerencodeError(Exception):
    """Base class for all toolkit errors."""


class ArgumentError(HerencodeError, ValueError):
    """A caller passed an argument outside the documented domain."""


class InvariantError(HerencodeError, ValueError):
    """A value violates a structural invariant (e.g. an intra-part edge)."""


class ParseError(HerencodeError, ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class MalformedWordError(HerencodeError, ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnsupportedPrimeError(HerencodeError):
    def __init__(self, quotient):
        super().__init__(f"prime codec cannot encode quotient with {quotient.n} vertices")
        self.quotient = quotient


class DecodeError(HerencodeError, ValueError):
    """A label or encoded description could not be decoded."""


class SchemeUnavailableError(HerencodeError):
    def __init__(self, message: str, residual=None):
        super().__init__(message)
        self.residual = residual


class CertificateInvalidError(HerencodeError):
    def __init__(self, message: str, vertex=None):
        super().__init__(message)
        self.vertex = vertex


class NotInClassError(HerencodeError):
    def __init__(self, message: str, residual=None):
        super().__init__(message)
        self.residual = residual


class ClaimViolated(HerencodeError):
    """A numbered proof claim failed on the given input."""

    def __init__(self, claim, witness=(), detail: str = ""):
        self.claim = str(claim)
        self.witness = tuple(witness)
        msg = f"claim ({self.claim}) violated"
        if self.witness:
            msg += f" by vertices {list(self.witness)}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class PreconditionMissing(HerencodeError):
    """A required sub-pattern is absent and no reduction is defined."""


class NotBipartiteError(HerencodeError):
    pass


class ResourceError(HerencodeError):
    """The requested enumeration is too large for the brute-force oracle."""
