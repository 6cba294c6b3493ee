"""Central tolerance record shared by every module."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    unit_norm: float = 1e-12
    orthogonality: float = 1e-10
    geometry: float = 1e-12
    collinear_area: float = 1e-14
    metric: float = 1e-9
    # max vertex deviation (relative to diameter) allowed when a process
    # simplifies an iterate; 0 disables simplification
    simplify: float = 1e-8
    # iterates with at most this many vertices are never simplified
    simplify_above: int = 256
    window: int = 50
    tol_polygon: float = 1e-6
    tol_raster: float = 5e-3


DEFAULT = Tolerances()
