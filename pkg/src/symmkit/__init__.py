"""Symmetrization operators and symmetrization processes for planar convex bodies."""

from .config import DEFAULT, Tolerances
from .geom import LineSubspace, RotationOp
from .polygon import (ConvexPolygon, ball_gap, fiber_symmetrize, hausdorff_distance, mean_width,
                      minkowski_symmetrize, steiner_symmetrize)
from .grid import DirectionSet, SupportGrid, minkowski_symmetrize_grid, sample_from_polygon
from .raster import PointCloud, RasterSet, steiner_symmetrize_raster
from .sequences import AngleSequence, DirectionSequence, gamma_product, generate_sequence, rotation_schedule
from .processes import (ProcessSpec, ProcessTrace, cross_symmetrization_check, detect_convergence,
                        divergence_certificate, run_process, truncation_stability)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT", "Tolerances", "LineSubspace", "RotationOp", "ConvexPolygon", "ball_gap", "fiber_symmetrize",
    "hausdorff_distance", "mean_width", "minkowski_symmetrize", "steiner_symmetrize", "DirectionSet",
    "SupportGrid", "minkowski_symmetrize_grid", "sample_from_polygon", "PointCloud", "RasterSet",
    "steiner_symmetrize_raster", "AngleSequence", "DirectionSequence", "gamma_product", "generate_sequence",
    "rotation_schedule", "ProcessSpec", "ProcessTrace", "cross_symmetrization_check", "detect_convergence",
    "divergence_certificate", "run_process", "truncation_stability",
]
