"""Exact multi-target quantum search: circuits, simulation, lowering, metrics."""

__version__ = "0.1.0"

from .circuit import Circuit, DepthPolicy, Gate, GateKind
from .search import PhaseParams, SearchSpec, Variant

__all__ = [
    "Circuit",
    "DepthPolicy",
    "Gate",
    "GateKind",
    "PhaseParams",
    "SearchSpec",
    "Variant",
    "__version__",
]
