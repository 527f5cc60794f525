"""Exception hierarchy for every domain failure the toolkit reports."""

from typing import Any, Dict


class SpexTreeError(Exception):
    """Base class. ``code`` is the stable machine-readable error name."""

    def __init__(self, message: str = "", **extra: Any):
        super().__init__(message)
        self.message = message
        self.extra = extra

    @property
    def code(self) -> str:
        return type(self).__name__

    def to_dict(self) -> Dict[str, Any]:
        out = {"error": self.code, "message": self.message}
        out.update(self.extra)
        return out


# tree-core
class ParseError(SpexTreeError):
    pass


class NotATree(SpexTreeError):
    pass


class BadLabel(SpexTreeError):
    pass


# decomposition
class InvalidSubset(SpexTreeError):
    pass


class NotConnected(SpexTreeError):
    pass


class VertexAbsent(SpexTreeError):
    pass


# hypothesis witnesses
class EmptyWitness(SpexTreeError):
    pass


class NotSubsetOfJprime(SpexTreeError):
    pass


class InvalidWitness(SpexTreeError):
    pass


class SearchCapExceeded(SpexTreeError):
    pass


# embedder
class PreconditionFailed(SpexTreeError):
    pass


class ConditionsNotMet(SpexTreeError):
    pass


class InvalidCertificate(SpexTreeError):
    pass


class InternalVerificationFailed(SpexTreeError):
    pass


class BudgetExceeded(SpexTreeError):
    pass


# constructors
class InfeasibleFamily(SpexTreeError):
    pass


class SpecInvalid(SpexTreeError):
    pass


class HypothesisMissing(SpexTreeError):
    pass


class DeltaMismatch(SpexTreeError):
    pass


class DeltaIsOne(SpexTreeError):
    pass


class UnsupportedParameters(SpexTreeError):
    pass


# spectral
class DomainError(SpexTreeError):
    pass


class DeltaTooSmall(SpexTreeError):
    pass


class InvalidInputs(SpexTreeError):
    pass


# extremal-lab
class OutOfRange(SpexTreeError):
    pass


class TooLarge(SpexTreeError):
    pass


# cli / sweep
class ConfigError(SpexTreeError):
    pass
