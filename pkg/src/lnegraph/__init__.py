"""Topological invariants of Lipschitz normally embedded surface singularities.

Given the weighted dual graph of a minimal good resolution, compute the
fundamental cycle, multiplicities, ℒ- and 𝒫-vectors, inner rates, the
resolution refined through the Nash transform, and the Eggers-Wall tree of
the discriminant curve of a generic plane projection.
"""

__version__ = "0.1.0"

from .cycles import CycleData, NotLneCertificate, fundamental_cycle, l_vector, lne_cycle_data
from .errors import GraphValidationError, InvariantViolation, LneError
from .graph import WeightedGraph, blow_up_double_point, intersection, validate_graph
from .io import load_example, load_graph
from .nash import RefinedGraph, nash_refine
from .pipeline import PipelineReport, run_pipeline
from .rates import RateAssignment, inner_rates, p_vector

__all__ = [
    "CycleData", "GraphValidationError", "InvariantViolation", "LneError", "NotLneCertificate",
    "PipelineReport", "RateAssignment", "RefinedGraph", "WeightedGraph", "blow_up_double_point",
    "fundamental_cycle", "inner_rates", "intersection", "l_vector", "lne_cycle_data",
    "load_example", "load_graph", "nash_refine", "p_vector", "run_pipeline", "validate_graph",
]
