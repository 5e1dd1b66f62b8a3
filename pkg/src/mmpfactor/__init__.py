"""Exact bookkeeping for factoring threefold divisorial contractions into elementary steps."""

from .catalogue import (
    CaseId,
    ContractionDescriptor,
    FactoringDiagram,
    build_curve_diagram,
    build_diagram,
    validate_descriptor,
)
from .lattice import QuotientLatticeSpec, SupportSet, WeightVector
from .machine import FactorizationTrace, MapState, factorize, termination_certificate
from .singularity import PointGerm, SingularityClass, StepKind, TransitionKind, depth_transition_check

__all__ = [
    "CaseId",
    "ContractionDescriptor",
    "FactoringDiagram",
    "FactorizationTrace",
    "MapState",
    "PointGerm",
    "QuotientLatticeSpec",
    "SingularityClass",
    "StepKind",
    "SupportSet",
    "TransitionKind",
    "WeightVector",
    "build_curve_diagram",
    "build_diagram",
    "depth_transition_check",
    "factorize",
    "termination_certificate",
    "validate_descriptor",
]
