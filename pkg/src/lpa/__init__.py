"""Graded ideals and quotients of Leavitt path algebras over Z and Z_n.

The library works purely on combinatorial data: a graph, its lattice of
admissible pairs, and functions assigning ideals of the coefficient ring to
admissible pairs (``f``) or to extended vertices (``φ``).
"""

from .constructions import (
    AlgebraDescriptor,
    PorcupineGraph,
    QuotientGraph,
    find_isomorphism,
    isomorphic,
    porcupine,
    quotient_graph,
    recognize,
)
from .graded import (
    GradedIdealFn,
    SaturatedFn,
    XVertex,
    classify,
    f_from_phi,
    graded_fn,
    max_basic_pair,
    membership,
    phi_from_f,
    saturated_fn,
    validate_phi,
    validate_saturated,
)
from .graph import INF, EdgeBundle, Graph, GraphError, condition_K, condition_L, cu_cycles, make_graph
from .ideals import Ideal, Ring, Z, Zn
from .lattice import AdmissiblePair, PairLattice, enumerate_HE, enumerate_TE
from .quotients import cross_check, decompose, epimorphism_data, quotient_ibasic

__version__ = "0.1.0"

__all__ = [
    "INF",
    "AdmissiblePair",
    "AlgebraDescriptor",
    "EdgeBundle",
    "GradedIdealFn",
    "Graph",
    "GraphError",
    "Ideal",
    "PairLattice",
    "PorcupineGraph",
    "QuotientGraph",
    "Ring",
    "SaturatedFn",
    "XVertex",
    "Z",
    "Zn",
    "classify",
    "condition_K",
    "condition_L",
    "cross_check",
    "cu_cycles",
    "decompose",
    "enumerate_HE",
    "enumerate_TE",
    "epimorphism_data",
    "f_from_phi",
    "find_isomorphism",
    "graded_fn",
    "isomorphic",
    "make_graph",
    "max_basic_pair",
    "membership",
    "phi_from_f",
    "porcupine",
    "quotient_graph",
    "quotient_ibasic",
    "recognize",
    "saturated_fn",
    "validate_phi",
    "validate_saturated",
]
