"""Exception types shared across the package."""

from __future__ import annotations


class RacgError(Exception):
    """Base class for every error raised by this package."""


class GraphError(RacgError, ValueError):
    """Malformed graph, vertex set or index set."""


class PresentationError(RacgError, ValueError):
    """Malformed presentation, word or matrix."""


class ResourceLimit(RacgError):
    """A computation exceeded its size or time budget.

    This signals a desk-scale bound, never a mathematical answer.
    """


class SizeLimitExceeded(ResourceLimit):
    pass


class ConditionFailure(RacgError):
    """Raised when collapsing a graph that is not a clique graph."""

    def __init__(self, report):
        self.report = report
        super().__init__(report.summary())


class CollapseError(RacgError):
    """The collapsing traversal hit an impossible count.

    Cannot happen for graphs passing all three conditions.
    """


class InsufficientRank(RacgError):
    """No independent extension of a GF(2) set exists among the candidates."""


class NotAnInvolution(RacgError, ValueError):
    pass


class SupportNotClique(RacgError):
    pass


class HypothesisViolation(RacgError):
    """A partial-conjugation family violates the extension-theorem hypotheses."""

    def __init__(self, message: str, pair: tuple[str, str] | None = None):
        self.pair = pair
        super().__init__(message)
