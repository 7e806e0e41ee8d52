"""Exception hierarchy shared by every layer of the package."""

from __future__ import annotations


class AzdeltaError(Exception):
    """Base class for all package errors."""


class FieldMismatchError(AzdeltaError, TypeError):
    """Arithmetic between elements of two different quadratic fields."""


class DegreeCapError(AzdeltaError):
    """A polynomial produced by the engine exceeds the supported degree."""


class UnsupportedRootsError(AzdeltaError):
    """Root isolation needs a degree we do not solve exactly."""


class NeedsNumericPathError(AzdeltaError):
    """Closed-form integration of a genuine rational function was requested."""


class NotPseudoEffectiveError(AzdeltaError):
    """A class lies outside the pseudo-effective cone.

    ``certificate`` carries a functional that is non-positive on every
    generator and positive on the offending class.
    """

    def __init__(self, message: str, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class UnboundedError(AzdeltaError):
    """A linear program has no finite optimum."""


class NonPolynomialWallError(AzdeltaError):
    """A chamber wall cannot be written as a polynomial in the outer parameter."""


class ChamberError(AzdeltaError):
    """The chamber walk reached a state it cannot resolve."""


class LedgerError(AzdeltaError):
    """A Zariski ledger fails one of its checks."""

    def __init__(self, message: str, check: str = "", detail=None):
        super().__init__(message)
        self.check = check
        self.detail = detail


class MissingIncidenceError(AzdeltaError):
    """A flag computation needs an incidence number that was not supplied."""


class LatticeError(AzdeltaError):
    """Malformed lattice data or classes from two different lattices."""


class ScenarioError(AzdeltaError):
    """A scenario file does not parse or does not validate."""

    def __init__(self, message: str, path: str = ""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path
