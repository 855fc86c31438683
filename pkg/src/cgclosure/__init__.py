"""Exact Chvátal-Gomory closures of polytopes over Q and Q(sqrt m)."""
from .body import Ball, ConvexBody, Ellipse2D, PolytopeBody, body_from_json, polytope_body
from .closure import (
    ClosureConfig,
    ClosureResult,
    OracleResult,
    VerifyReport,
    brute_force_closure,
    cg_closure,
    interior_direction_bound,
    verify_closure,
)
from .cuts import CGCut, CutPool, cg_cut, deepest_cut, zero_direction_cut
from .errors import DomainError
from .geometry import AffineSubspace, Face, Polytope, from_inequalities, from_vertices, pi_face
from .homogeneity import HomogeneityCertificate, lift_cut, pin_to_rational_subspace
from .kronecker import approximate, dense_subspace, sign_balanced_approximants
from .numeric import CertifiedInterval, QuadExt, floor_quad
from .plot import plot2d

__all__ = [
    "AffineSubspace", "Ball", "CGCut", "CertifiedInterval", "ClosureConfig", "ClosureResult",
    "ConvexBody", "CutPool", "DomainError", "Ellipse2D", "Face", "HomogeneityCertificate",
    "OracleResult", "Polytope", "PolytopeBody", "QuadExt", "VerifyReport", "approximate",
    "body_from_json", "brute_force_closure", "cg_closure", "cg_cut", "deepest_cut",
    "dense_subspace", "floor_quad", "from_inequalities", "from_vertices",
    "interior_direction_bound", "lift_cut", "pi_face", "pin_to_rational_subspace", "plot2d",
    "polytope_body", "sign_balanced_approximants", "verify_closure", "zero_direction_cut",
]
