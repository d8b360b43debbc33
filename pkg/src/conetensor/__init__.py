"""Exact tensor products of polyhedral cones.

All arithmetic is rational (``fractions.Fraction``).  A cone is given by
generators or inequalities; ``projective_cone`` and ``injective_cone``
build the smallest and largest tensor cones, ``min_equals_max`` compares
them with a certificate either way.
"""

from .cone import (Cone, ConeError, NotProper, NotProperGenerating, PolygonCone, as_polygon_cone,
                   cone_equal, cone_from_json, contains_cone, direct_sum, double_description, dual,
                   homogenize_polytope, load_cone, polygon_homogenization, proper_reduction,
                   regular_polygon, simplex_cone, strictly_positive_functional)
from .lp import Infeasible, Inside, LinearProgram, Optimal, Outside, Unbounded, cone_membership, solve_lp
from .report import Report, verify_report
from .retract import (Retraction, compose, facet_retract, ray_retract, retract_transfer,
                      three_dim_retract_scan, verify_retraction, vertex_figure)
from .sep import (Entangled, Separable, check_min_equals_max_equivalences, factor_through_simplex,
                  is_positive_map, is_separable, min_trace_positive_map)
from .tensorcone import (Differs, Equal, TensorElement, injective_cone, min_equals_max,
                         obstruction_3x3, projective_cone, tensor_vec, verify_differs)

__version__ = "0.1.0"

__all__ = [
    "Cone", "ConeError", "NotProper", "NotProperGenerating", "PolygonCone", "as_polygon_cone",
    "cone_equal", "cone_from_json", "contains_cone", "direct_sum", "double_description", "dual",
    "homogenize_polytope", "load_cone", "polygon_homogenization", "proper_reduction",
    "regular_polygon", "simplex_cone", "strictly_positive_functional",
    "Infeasible", "Inside", "LinearProgram", "Optimal", "Outside", "Unbounded", "cone_membership",
    "solve_lp", "Report", "verify_report",
    "Retraction", "compose", "facet_retract", "ray_retract", "retract_transfer",
    "three_dim_retract_scan", "verify_retraction", "vertex_figure",
    "Entangled", "Separable", "check_min_equals_max_equivalences", "factor_through_simplex",
    "is_positive_map", "is_separable", "min_trace_positive_map",
    "Differs", "Equal", "TensorElement", "injective_cone", "min_equals_max", "obstruction_3x3",
    "projective_cone", "tensor_vec", "verify_differs",
]
