"""Convex bodies as support functions sampled on a fixed direction set (n = 2, 3).

Minkowski symmetrization and rotations act pointwise on support functions, so
they are computed here without any polygonal model. Steiner symmetrization is
not a pointwise support-function operation and deliberately has no grid
version.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np
from scipy.spatial import ConvexHull, SphericalVoronoi, cKDTree

from .geom import LineSubspace, RotationOp, reflect_point
from .polygon import ConvexPolygon

TWO_PI = 2.0 * math.pi
EXACT_TOL = 1e-9


class GridMismatchError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class DirectionSet:
    dimension: int
    directions: np.ndarray
    weights: np.ndarray

    @classmethod
    def circle(cls, N: int = 4096) -> "DirectionSet":
        t = TWO_PI * np.arange(N) / N
        return cls(2, np.column_stack([np.cos(t), np.sin(t)]), np.full(N, TWO_PI / N))

    @classmethod
    def icosphere(cls, level: int = 4) -> "DirectionSet":
        """Subdivided icosahedron (10 * 4**level + 2 points) with spherical Voronoi weights."""
        pts = _icosphere_points(level)
        sv = SphericalVoronoi(pts, radius=1.0)
        return cls(3, pts, sv.calculate_areas())

    def __len__(self) -> int:
        return len(self.directions)

    @property
    def sphere_measure(self) -> float:
        return TWO_PI if self.dimension == 2 else 4.0 * math.pi

    @cached_property
    def angles(self) -> np.ndarray:
        if self.dimension != 2:
            raise GridMismatchError("angles exist only for planar grids")
        return TWO_PI * np.arange(len(self)) / len(self)

    @cached_property
    def _tree(self) -> cKDTree:
        return cKDTree(self.directions)

    @cached_property
    def _facets(self):
        hull = ConvexHull(self.directions)
        tri = hull.simplices
        normals = hull.equations[:, :3]
        offsets = -hull.equations[:, 3]
        return tri, normals, offsets

    def antipode_index(self) -> np.ndarray:
        d, idx = self._tree.query(-self.directions)
        if np.max(d) > EXACT_TOL:
            raise GridMismatchError("direction set is not centrally symmetric")
        return idx


def _icosphere_points(level: int) -> np.ndarray:
    g = (1.0 + math.sqrt(5.0)) / 2.0
    v = [(-1, g, 0), (1, g, 0), (-1, -g, 0), (1, -g, 0),
         (0, -1, g), (0, 1, g), (0, -1, -g), (0, 1, -g),
         (g, 0, -1), (g, 0, 1), (-g, 0, -1), (-g, 0, 1)]
    verts = [np.array(p, dtype=float) / np.linalg.norm(p) for p in v]
    faces = [(0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
             (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
             (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
             (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1)]
    for _ in range(level):
        cache: dict[tuple[int, int], int] = {}

        def mid(a, b):
            key = (min(a, b), max(a, b))
            if key not in cache:
                m = verts[a] + verts[b]
                verts.append(m / np.linalg.norm(m))
                cache[key] = len(verts) - 1
            return cache[key]

        new = []
        for a, b, c in faces:
            ab, bc, ca = mid(a, b), mid(b, c), mid(c, a)
            new += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = new
    return np.array(verts)


@dataclass(frozen=True, eq=False)
class SupportGrid:
    dirs: DirectionSet
    values: np.ndarray
    approximate: bool = False
    interp_error: float = 0.0

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (len(self.dirs),) or not np.all(np.isfinite(v)):
            raise ValueError("support values must be finite, one per direction")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    def __add__(self, other: "SupportGrid") -> "SupportGrid":
        _same(self, other)
        return SupportGrid(self.dirs, self.values + other.values,
                           self.approximate or other.approximate,
                           self.interp_error + other.interp_error)

    def scaled(self, t: float) -> "SupportGrid":
        return replace(self, values=self.values * t)

    def convexity_defect(self) -> float:
        """Largest violation of the discrete support-function inequality (2D)."""
        if self.dirs.dimension != 2:
            raise GridMismatchError("convexity test implemented for planar grids")
        h = self.values
        t = self.dirs.angles
        d = t[1] - t[0]
        hp, hn = np.roll(h, 1), np.roll(h, -1)
        # equally spaced: h_i <= (h_{i-1} + h_{i+1}) sin(d) / sin(2d)
        bound = (hp + hn) * math.sin(d) / math.sin(2 * d)
        return max(0.0, float((h - bound).max()))

    def is_consistent(self, tol: float = 1e-9) -> bool:
        return self.convexity_defect() <= tol


def _same(a: SupportGrid, b: SupportGrid):
    if a.dirs is not b.dirs and not (
        a.dirs.dimension == b.dirs.dimension
        and len(a.dirs) == len(b.dirs)
        and np.array_equal(a.dirs.directions, b.dirs.directions)
    ):
        raise GridMismatchError("support grids use different direction sets")


def sample_from_polygon(P: ConvexPolygon, D: DirectionSet) -> SupportGrid:
    if D.dimension != 2:
        raise GridMismatchError("polygons can only be sampled on planar grids")
    return SupportGrid(D, P.support(D.angles))


def sample_from_points(points, D: DirectionSet) -> SupportGrid:
    """Support function of the convex hull of a finite point set."""
    p = np.asarray(points, dtype=float)
    if p.shape[1] != D.dimension:
        raise GridMismatchError("point dimension differs from grid dimension")
    return SupportGrid(D, (D.directions @ p.T).max(axis=1))


def ball(D: DirectionSet, r: float = 1.0) -> SupportGrid:
    return SupportGrid(D, np.full(len(D), float(r)))


def _periodic_lookup(h: np.ndarray, pos: np.ndarray):
    """Values of the periodic sequence h at fractional indices pos (linear interpolation)."""
    N = len(h)
    rounded = np.rint(pos)
    if np.max(np.abs(pos - rounded)) < EXACT_TOL:
        return h[rounded.astype(np.int64) % N], False, 0.0
    i0 = np.floor(pos).astype(np.int64)
    w = pos - i0
    vals = (1 - w) * h[i0 % N] + w * h[(i0 + 1) % N]
    curv = np.abs(np.roll(h, 1) - 2 * h + np.roll(h, -1)).max()
    return vals, True, float(curv) / 8.0


def _sphere_lookup(D: DirectionSet, h: np.ndarray, q: np.ndarray):
    dist, idx = D._tree.query(q)
    if np.max(dist) < EXACT_TOL:
        return h[idx], False, 0.0
    tri, normals, offsets = D._facets
    # the ray through q leaves the hull through the facet maximizing (n . q) / offset
    f = np.argmax((q @ normals.T) / offsets[None, :], axis=1)
    corners = D.directions[tri[f]]                       # (m, 3, 3)
    t = offsets[f] / np.einsum("ij,ij->i", q, normals[f])
    p = q * t[:, None]
    bary = np.linalg.solve(np.transpose(corners, (0, 2, 1)), p[:, :, None])[:, :, 0]
    vals = np.einsum("ij,ij->i", bary, h[tri[f]])
    # support functions are 1-homogeneous: evaluate at p then rescale to |q| = 1
    vals = vals / np.linalg.norm(p, axis=1)
    spread = np.ptp(h[tri[f]], axis=1).max()
    return vals, True, float(spread)


def minkowski_symmetrize_grid(G: SupportGrid, H: LineSubspace) -> SupportGrid:
    """h -> (h(u) + h(R_H u)) / 2, exact when R_H maps the grid to itself."""
    D = G.dirs
    if H.ambient != D.dimension:
        raise GridMismatchError("subspace and grid live in different dimensions")
    if D.dimension == 2:
        N = len(D)
        pos = (2.0 * H.angle - D.angles) * N / TWO_PI
        refl, approx, err = _periodic_lookup(G.values, pos)
    else:
        refl, approx, err = _sphere_lookup(D, G.values, reflect_point(D.directions, H))
    return SupportGrid(D, 0.5 * (G.values + refl), G.approximate or approx, G.interp_error + 0.5 * err)


def rotate_grid(G: SupportGrid, R: RotationOp) -> SupportGrid:
    """Support function of R K: h'(u) = h(R^T u)."""
    D = G.dirs
    if R.dim != D.dimension:
        raise GridMismatchError("rotation and grid dimensions differ")
    if D.dimension == 2:
        N = len(D)
        pos = (D.angles - R.angle) * N / TWO_PI
        vals, approx, err = _periodic_lookup(G.values, pos)
    else:
        vals, approx, err = _sphere_lookup(D, G.values, D.directions @ R.matrix)
    return SupportGrid(D, vals, G.approximate or approx, G.interp_error + err)


def mean_width_quadrature(G: SupportGrid) -> float:
    D = G.dirs
    anti = D.antipode_index()
    s = math.fsum(D.weights * (G.values + G.values[anti]))
    return s / D.sphere_measure


def hausdorff_supnorm(G1: SupportGrid, G2: SupportGrid) -> float:
    _same(G1, G2)
    return float(np.abs(G1.values - G2.values).max())


def support_extremes(G: SupportGrid) -> tuple[float, float]:
    return float(G.values.min()), float(G.values.max())
