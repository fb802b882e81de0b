"""Gentle algebras as quivers with relations: threads, the pairing invariant,
elementary transformations, normal forms for two cycles, and enumeration."""

from .invariant import PhiInvariant, compute_phi, parse_phi, phi_cardinality, phi_equal
from .kernels import IMPLEMENTATION
from .normal_forms import InvariantTriple, build_family, build_normal_form, family_of, is_normal_form
from .quiver_core import (
    Arrow,
    GentlePresentation,
    Quiver,
    are_isomorphic,
    canonical_form,
    cycle_number,
    parse_quiver,
    presentation,
    to_dsl,
    validate_gentle,
)
from .reduction import decide_derived_equivalence, reduce_to_normal_form, remove_vertex
from .threads import partition_encoding, thread_array
from .transforms import TransformStep, applicable_steps, apply_step

__version__ = "0.1.0"

__all__ = [
    "IMPLEMENTATION",
    "Arrow",
    "GentlePresentation",
    "InvariantTriple",
    "PhiInvariant",
    "Quiver",
    "TransformStep",
    "applicable_steps",
    "apply_step",
    "are_isomorphic",
    "build_family",
    "build_normal_form",
    "canonical_form",
    "compute_phi",
    "cycle_number",
    "decide_derived_equivalence",
    "family_of",
    "is_normal_form",
    "parse_phi",
    "parse_quiver",
    "partition_encoding",
    "phi_cardinality",
    "phi_equal",
    "presentation",
    "reduce_to_normal_form",
    "remove_vertex",
    "thread_array",
    "to_dsl",
    "validate_gentle",
]
