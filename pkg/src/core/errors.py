"""
Exception hierarchy for carveorder.
Every error raised by the library derives from CarveError so that the
console entry point can map it to an exit code.
"""

from typing import Any, Dict, List, Optional, Tuple


class CarveError(ValueError):
    """Base class of all carveorder errors."""


class EmptyGraph(CarveError):
    """The network has no vertices."""


class DisconnectedGraph(CarveError):
    """The network is not connected."""


class OverlappingSets(CarveError):
    """Two vertex sets passed to a cut computation intersect."""


class BadPartition(CarveError):
    """Three vertex sets do not partition the vertex set."""


class NoSuchEdge(CarveError):
    """The requested edge is not in the graph."""


class NotPlanar(CarveError):
    """The graph has no planar embedding."""

    def __init__(self, message: str, witness: Optional[List[Tuple[str, str]]] = None):
        super().__init__(message)
        self.witness = witness or []


class NotPlanarEmbedding(CarveError):
    """A rotation system is inconsistent with its graph or is not planar."""


class BadShape(CarveError):
    """A tree shape violates the full binary tree degree rules."""


class BadLeafMap(CarveError):
    """The leaves of a tree do not biject onto the graph's vertices."""


class NoSuchArc(CarveError):
    """The requested arc is not in the tree."""


class InvalidDecomposition(CarveError):
    """A tree-decomposition violates one of its three defining properties."""


class NoEligibleEdge(CarveError):
    """The edge-contraction search found no eligible edge."""

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class MalformedSequence(CarveError):
    """A contraction sequence uses an operand that is not available."""


class DimensionMismatch(CarveError):
    """A dense tensor does not match the bond dimensions of its vertex."""


class TooLarge(CarveError):
    """An exact or brute-force computation was asked for an oversized input."""


class BudgetExceeded(CarveError):
    """An exact computation ran past its time budget."""


class RejectionBudgetExhausted(CarveError):
    """The graph sampler rejected too many draws."""


class GraphFormatError(CarveError):
    """A file does not follow the expected JSON layout."""

    def __init__(self, message: str, field: str = ""):
        super().__init__(f"{field}: {message}" if field else message)
        self.field = field


class InvariantViolation(CarveError):
    """An internal consistency check failed."""

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
