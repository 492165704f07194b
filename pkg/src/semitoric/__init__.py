"""Exact decision procedures for logarithmic tangent bundles of toric
varieties, semi-torus lattices and their compactifications."""

from .exactnum import ExactComplex, IntMatrix, QuadReal, smith_normal_form
from .fan import Fan, is_complete, is_projective, is_smooth, validate_fan
from .logtoric import snc_certificate, triviality_certificate, verify_triviality
from .semitorus import fiber_product_analyze, hopf_analyze, one_parameter_closure

__version__ = "0.1.0"

__all__ = [
    "ExactComplex",
    "Fan",
    "IntMatrix",
    "QuadReal",
    "fiber_product_analyze",
    "hopf_analyze",
    "is_complete",
    "is_projective",
    "is_smooth",
    "one_parameter_closure",
    "smith_normal_form",
    "snc_certificate",
    "triviality_certificate",
    "validate_fan",
    "verify_triviality",
]
