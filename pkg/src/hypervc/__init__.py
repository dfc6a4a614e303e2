"""Exact toolkit for minimum vertex cover on k-partite k-uniform hypergraphs."""

from .hypergraph import (
    CoverCertificate,
    FractionalSolution,
    IndependentSetCertificate,
    PartiteHypergraph,
)
from .setfam import SetFamily

__version__ = "0.1.0"

__all__ = [
    "CoverCertificate",
    "FractionalSolution",
    "IndependentSetCertificate",
    "PartiteHypergraph",
    "SetFamily",
    "__version__",
]
