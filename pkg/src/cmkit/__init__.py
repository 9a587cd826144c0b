"""Combinatorial vector-field dynamics on simplicial complexes.

The package computes the multivalued flow of a discrete vector field, its
minimal Morse decomposition and Conley indices, and realizes the same
dynamics geometrically through an exact-rational region calculus with
verified correspondence properties.
"""

__version__ = "0.1.0"

from .complex import ComplexError, SimplicialComplex, build_complex
from .field import FieldError, VectorField, field_from_partition, partition_view, validate_field
from .flow import (FlowGraph, InternalInvariantError, IsolationReport, SolutionSeq,
                   alpha_omega_limits, arrowhead_extension, canonical_index_pair,
                   flow_graph, flow_map, index_pair_check, invariant_part,
                   is_isolated_invariant, is_solution, reduce_solution)
from .geometry import (BaryPoint, Block, ConeBlock, GeometricDynamics, GeometryError,
                       LiftError, Params, ParamsError, RegionDescriptor, bary_point,
                       barycenter, default_params, in_region, make_params, vertex_point)
from .homology import conley_index, poincare_polynomial, relative_betti
from .morse import (ConleyMorseGraph, conley_morse_graph, export_dot, export_json,
                    minimal_morse_sets, morse_graph_from_json, morse_order,
                    validate_morse_decomposition)
from .verify import PropertyReport, SampleConfig, corner_battery, run_property_suite, sample_points

__all__ = [name for name in dir() if not name.startswith("_")]
