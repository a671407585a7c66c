"""Genus-4 Schottky form: lattice and theta constructions, Jacobian tests, divisor classes."""

from ._core import (
    ConvergenceError,
    CutoffInfeasibleError,
    DegenerateError,
    DomainError,
    Error,
    F_lattice,
    F_theta,
    ResourceLimitError,
    SiegelPoint,
    ValidationError,
    class_of_schottky,
    divisor_of_F,
    even_characteristics,
    jacobian_point,
    proportionality,
    relation_residual,
    representation_count,
    sample_points,
    schottky_indicator,
    short_vector_counts,
    theta_constant,
    theta_function,
)

__all__ = [name for name in dir() if not name.startswith("_")]
