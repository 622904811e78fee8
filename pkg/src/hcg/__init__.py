"""Curvature engine and homogeneity laboratory for coordinate metrics.

Modules
-------
jets
    Truncated multivariate Taylor arithmetic.
tensors
    Metric fields, Levi-Civita data, covariant derivatives, scalar invariants.
models
    Pointwise curvature models and isometry / homothety / variable matching.
zoo
    Walker and warped metric families with closed-form oracles.
lab
    Geodesics, level sets, classification and constructions.
cli
    The ``hcg`` command line.
"""
from .models import build_model, homothety_match, isometry_match, singer_profile, variable_match
from .tensors import (
    MetricField,
    covariant_derivative,
    curvature,
    curvature_derivatives,
    christoffel,
    ricci,
    scalar_curvature,
    weyl_scalars,
)

__all__ = [
    "MetricField",
    "build_model",
    "christoffel",
    "covariant_derivative",
    "curvature",
    "curvature_derivatives",
    "homothety_match",
    "isometry_match",
    "ricci",
    "scalar_curvature",
    "singer_profile",
    "variable_match",
    "weyl_scalars",
]
__version__ = "0.1.0"
