"""Exact computations of node polynomials and related enumerative formulas."""

from .bell import bell_eval, complete_bell, partial_bell
from .exactalg import SparsePolynomial, WeightedRing
from .families import (
    LinearForm,
    SurfaceInvariants,
    a_coefficients,
    count_on_surface,
    node_polynomial,
    p4_node_class,
    planes_through_line_count,
    quintic_irreducible_count,
)
from .kp_core import b_classes, principal_parts_top_chern, q_operator, x_class

__all__ = [
    "LinearForm", "SparsePolynomial", "SurfaceInvariants", "WeightedRing",
    "a_coefficients", "b_classes", "bell_eval", "complete_bell", "count_on_surface",
    "node_polynomial", "p4_node_class", "partial_bell", "planes_through_line_count",
    "principal_parts_top_chern", "q_operator", "quintic_irreducible_count", "x_class",
]
