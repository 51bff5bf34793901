"""Extrinsic geometry of left-invariant unit vector fields on metric Lie groups,
with closed forms for oscillator and Heisenberg groups."""
from ._scalars import ConventionError, DomainError, InputError
from .lie_metric import (
    ConnectionTable,
    CurvatureTensor,
    MetricLieAlgebra,
    bracket,
    curvature,
    evaluate_curvature,
    koszul_connection,
)
from .field_geometry import GeometryReport, classify, nomizu, singular_frame
from .oscillator import OscillatorSpec, heisenberg_algebra, oscillator_algebra

__version__ = "0.1.0"
