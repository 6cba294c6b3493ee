"""Binary-raster compact sets and finite point clouds in the plane.

A raster lives in a rotated frame: cell (i, j) covers [i h, (i+1) h) x [j h, (j+1) h)
in frame coordinates, and frame coordinates map to the plane by the rotation
``angle``. Steiner symmetrization resamples into the frame of the line, where
every column is one chord; rotating a raster only changes its frame angle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.spatial import ConvexHull, cKDTree

from .geom import LineSubspace, reflect_point
from .polygon import ConvexPolygon

HALF_PI = 0.5 * math.pi


class CapacityError(RuntimeError):
    pass


class EmptyRasterError(ValueError):
    pass


def _rot(a: float) -> np.ndarray:
    c, s = math.cos(a), math.sin(a)
    return np.array([[c, -s], [s, c]])


@dataclass(frozen=True, eq=False)
class RasterSet:
    cell_size: float
    half_extent: int
    mask: np.ndarray
    origin: tuple[int, int] = (0, 0)
    angle: float = 0.0

    def __post_init__(self):
        if not self.cell_size > 0:
            raise ValueError("cell_size must be positive")
        m = np.asarray(self.mask, dtype=bool)
        if m.ndim != 2:
            raise ValueError("mask must be 2D")
        if not m.any():
            raise EmptyRasterError("raster has no occupied cell")
        ii, jj = np.nonzero(m)
        i0, j0 = self.origin
        i_lo, i_hi = ii.min(), ii.max()
        j_lo, j_hi = jj.min(), jj.max()
        m = m[i_lo:i_hi + 1, j_lo:j_hi + 1].copy()
        o = (int(i0 + i_lo), int(j0 + j_lo))
        E = self.half_extent
        if o[0] < -E or o[1] < -E or o[0] + m.shape[0] > E or o[1] + m.shape[1] > E:
            raise CapacityError("occupied cells leave the raster domain")
        m.flags.writeable = False
        object.__setattr__(self, "mask", m)
        object.__setattr__(self, "origin", o)

    @classmethod
    def from_indicator(cls, fn, cell_size: float = 1 / 512, half_extent: int = 768) -> "RasterSet":
        """Occupy every cell whose centre (in the plane) satisfies ``fn(x, y)``."""
        c = (np.arange(-half_extent, half_extent) + 0.5) * cell_size
        X, Y = np.meshgrid(c, c, indexing="ij")
        return cls(cell_size, half_extent, fn(X, Y), (-half_extent, -half_extent))

    @classmethod
    def from_cells(cls, cells, cell_size: float = 1 / 512, half_extent: int = 768, angle: float = 0.0) -> "RasterSet":
        cells = np.asarray(cells, dtype=np.int64).reshape(-1, 2)
        lo = cells.min(axis=0)
        shape = cells.max(axis=0) - lo + 1
        m = np.zeros(shape, dtype=bool)
        m[cells[:, 0] - lo[0], cells[:, 1] - lo[1]] = True
        return cls(cell_size, half_extent, m, (int(lo[0]), int(lo[1])), angle)

    @property
    def count(self) -> int:
        return int(self.mask.sum())

    def cells(self) -> np.ndarray:
        ii, jj = np.nonzero(self.mask)
        return np.column_stack([ii + self.origin[0], jj + self.origin[1]])

    def centers(self) -> np.ndarray:
        """Cell centres in the plane."""
        f = (self.cells() + 0.5) * self.cell_size
        return f @ _rot(self.angle).T

    def corners(self) -> np.ndarray:
        """Corners of the extreme cells of every column, in the plane."""
        m = self.mask
        cols = np.flatnonzero(m.any(axis=1))
        lo = np.argmax(m[cols], axis=1)
        hi = m.shape[1] - 1 - np.argmax(m[cols, ::-1], axis=1)
        i = cols + self.origin[0]
        pts = []
        for di in (0, 1):
            pts.append(np.column_stack([i + di, lo + self.origin[1]]))
            pts.append(np.column_stack([i + di, hi + self.origin[1] + 1]))
        f = np.concatenate(pts).astype(float) * self.cell_size
        return f @ _rot(self.angle).T

    def rotated(self, angle: float) -> "RasterSet":
        """The raster rotated by ``angle`` about the origin (frame change, no resampling)."""
        return replace(self, angle=self.angle + angle)


def raster_area(S: RasterSet) -> float:
    return S.count * S.cell_size ** 2


def _quarter_turn(S: RasterSet, k: int) -> RasterSet:
    """Re-express S in the frame turned by k quarter turns (exact index map)."""
    c = S.cells()
    i, j = c[:, 0], c[:, 1]
    k %= 4
    if k == 0:
        ni, nj = i, j
    elif k == 1:
        ni, nj = j, -i - 1
    elif k == 2:
        ni, nj = -i - 1, -j - 1
    else:
        ni, nj = -j - 1, i
    return RasterSet.from_cells(np.column_stack([ni, nj]), S.cell_size, S.half_extent, S.angle + k * HALF_PI)


def _quarter_turns(delta: float):
    q = delta / HALF_PI
    k = round(q)
    if abs(q - k) < 1e-12:
        return int(k)
    return None


def coverage(S: RasterSet, new_angle: float, supersample: int = 4, chunk: int = 256):
    """Fractional cell coverage of S in the frame of ``new_angle``.

    Returns (coverage, hit, origin): ``coverage`` is the fraction of the
    ``supersample**2`` subsamples of each new cell that land in an occupied old
    cell, ``hit`` flags cells with at least one subsample inside.
    """
    delta = S.angle - new_angle
    to_new = _rot(delta)
    to_old = to_new.T
    i0, j0 = S.origin
    W, Hh = S.mask.shape
    box = np.array([[i0, j0], [i0 + W, j0], [i0 + W, j0 + Hh], [i0, j0 + Hh]], dtype=float)
    nb = box @ to_new.T
    lo = np.floor(nb.min(axis=0)).astype(int) - 1
    hi = np.ceil(nb.max(axis=0)).astype(int) + 1
    ni, nj = hi - lo
    offs = (np.arange(supersample) + 0.5) / supersample
    cov = np.zeros((ni, nj))
    hit = np.zeros((ni, nj), dtype=bool)
    J = np.arange(nj)[None, :, None, None] + lo[1] + offs[None, None, None, :]
    for a in range(0, ni, chunk):
        I = np.arange(a, min(a + chunk, ni))[:, None, None, None] + lo[0] + offs[None, None, :, None]
        I, Jb = np.broadcast_arrays(I, J)
        x = to_old[0, 0] * I + to_old[0, 1] * Jb
        y = to_old[1, 0] * I + to_old[1, 1] * Jb
        oi = np.floor(x).astype(np.int64) - i0
        oj = np.floor(y).astype(np.int64) - j0
        ok = (oi >= 0) & (oi < W) & (oj >= 0) & (oj < Hh)
        inside = np.zeros(oi.shape, dtype=bool)
        inside[ok] = S.mask[oi[ok], oj[ok]]
        cnt = inside.sum(axis=(2, 3))
        cov[a:a + cnt.shape[0]] = cnt / supersample ** 2
        hit[a:a + cnt.shape[0]] = cnt > 0
    return cov, hit, (int(lo[0]), int(lo[1]))


def resample(S: RasterSet, new_angle: float, supersample: int = 4) -> RasterSet:
    """Majority-measure resampling of S into the frame of ``new_angle``."""
    k = _quarter_turns(new_angle - S.angle)
    if k is not None:
        return _quarter_turn(S, k)
    cov, _, o = coverage(S, new_angle, supersample)
    return RasterSet(S.cell_size, S.half_extent, cov >= 0.5, o, new_angle)


def column_measures(S: RasterSet, angle: float, supersample: int = 4):
    """Integer chord lengths (in cells) of every column in the frame of ``angle``.

    Returns (first column index, counts, exact) where ``exact`` is True when no
    resampling was needed. A column that meets the set at all keeps at least
    one cell, mirroring the rule that a non-empty null section becomes a point.
    """
    k = _quarter_turns(angle - S.angle)
    if k is not None:
        T = _quarter_turn(S, k)
        return T.origin[0], T.mask.sum(axis=1).astype(np.int64), True
    cov, hit, o = coverage(S, angle, supersample)
    meas = cov.sum(axis=1)
    nonempty = hit.any(axis=1)
    counts = np.where(nonempty, np.maximum(1, np.rint(meas)), 0).astype(np.int64)
    return o[0], counts, False


def centred_columns(counts: np.ndarray, first: int, cell_size: float, half_extent: int, angle: float) -> RasterSet:
    """Raster whose column i holds a run of counts[i] cells centred on the frame x-axis."""
    lower = -((counts + 1) // 2)
    upper = counts // 2
    jmin, jmax = int(lower.min()), int(upper.max())
    j = np.arange(jmin, jmax)[None, :]
    m = (j >= lower[:, None]) & (j < upper[:, None])
    return RasterSet(cell_size, half_extent, m, (first, jmin), angle)


def steiner_symmetrize_raster(S: RasterSet, H: LineSubspace, supersample: int = 4) -> RasterSet:
    """Replace every chord orthogonal to H by the centred run of equal measure.

    The result is expressed in the frame of H (its columns are the chords).
    """
    if S.count == 0:
        raise EmptyRasterError("cannot symmetrize an empty raster")
    first, counts, _ = column_measures(S, H.angle, supersample)
    return centred_columns(counts, first, S.cell_size, S.half_extent, H.angle)


def axis_section_length(S: RasterSet) -> float:
    """Length of S meeting the x-axis of its own frame (rows -1 and 0 as closed cells)."""
    i0, j0 = S.origin
    rows = [r - j0 for r in (-1, 0) if 0 <= r - j0 < S.mask.shape[1]]
    if not rows:
        return 0.0
    cols = S.mask[:, rows].any(axis=1)
    idx = np.flatnonzero(cols)
    return float(idx.max() - idx.min() + 1) * S.cell_size


def convex_hull_raster(S: RasterSet) -> ConvexPolygon:
    return ConvexPolygon.hull(S.corners())


def is_symmetric_about_axis(S: RasterSet) -> bool:
    """Whether S is symmetric about its frame x-axis up to one cell."""
    c = S.cells()
    mirrored = np.column_stack([c[:, 0], -c[:, 1] - 1])
    a = {tuple(x) for x in c.tolist()}
    b = {tuple(x) for x in mirrored.tolist()}
    if a == b:
        return True

    def near(x, other):
        i, j = x
        return (i, j) in other or (i, j - 1) in other or (i, j + 1) in other

    # each cell has a mirror image within one cell, both ways
    return all(near(x, b) for x in a) and all(near(x, a) for x in b)


class RasterMetric:
    """Hausdorff distances between rasters, treating each cell as its centre."""

    def __init__(self, S: RasterSet):
        self.points = S.centers()
        self.tree = cKDTree(self.points)
        try:
            hv = ConvexHull(self.points).vertices
            self.extreme = self.points[hv]
        except Exception:
            self.extreme = self.points

    def exact(self, other: "RasterMetric") -> float:
        d1 = other.tree.query(self.points)[0].max()
        d2 = self.tree.query(other.points)[0].max()
        return float(max(d1, d2))

    def lower(self, other: "RasterMetric") -> float:
        """Certified lower bound from the extreme points of both sets."""
        d1 = other.tree.query(self.extreme)[0].max()
        d2 = self.tree.query(other.extreme)[0].max()
        return float(max(d1, d2))


def raster_hausdorff(A: RasterSet, B: RasterSet) -> float:
    return RasterMetric(A).exact(RasterMetric(B))


# -- point clouds --------------------------------------------------------

MAX_PAIRS = 10 ** 7


@dataclass(frozen=True, eq=False)
class PointCloud:
    points: np.ndarray
    max_size: int = 200_000

    def __post_init__(self):
        p = np.asarray(self.points, dtype=float).reshape(-1, 2)
        if not np.all(np.isfinite(p)):
            raise ValueError("non-finite cloud point")
        if len(p) == 0:
            raise ValueError("empty cloud")
        if len(p) > self.max_size:
            raise CapacityError(f"cloud of {len(p)} points exceeds max_size {self.max_size}")
        p = p.copy()
        p.flags.writeable = False
        object.__setattr__(self, "points", p)

    def __len__(self) -> int:
        return len(self.points)

    def hull(self) -> ConvexPolygon:
        return ConvexPolygon.hull(self.points)


def minkowski_symmetrize_cloud(C: PointCloud, H: LineSubspace, snap: float = 1e-4) -> PointCloud:
    """All midpoints (c + R_H c') / 2, deduplicated on a grid of pitch ``snap``.

    One representative (an actual midpoint) is kept per snap cell, and the
    vertices of the convex hull of all midpoints are always kept, so the hull
    of the result is exactly the Minkowski symmetral of the hull of C.
    """
    n = len(C)
    if n * n > MAX_PAIRS:
        raise CapacityError(f"{n}^2 midpoint pairs exceed the limit of {MAX_PAIRS}")
    p = C.points
    r = reflect_point(p, H)
    mids = 0.5 * (p[:, None, :] + r[None, :, :]).reshape(-1, 2)
    keys = np.floor(mids / snap + 0.5).astype(np.int64)
    keys -= keys.min(axis=0)
    # one int64 per cell is much faster to deduplicate than rows
    flat = keys[:, 0] * (int(keys[:, 1].max()) + 1) + keys[:, 1]
    _, first = np.unique(flat, return_index=True)
    rep = mids[np.sort(first)]
    hp = C.hull().vertices
    hr = reflect_point(hp, H)
    extreme = ConvexPolygon.hull(0.5 * (hp[:, None, :] + hr[None, :, :]).reshape(-1, 2)).vertices
    out = np.unique(np.concatenate([rep, extreme]), axis=0)
    if len(out) > C.max_size:
        raise CapacityError(f"cloud grew to {len(out)} points after snapping (max_size {C.max_size})")
    return PointCloud(out, C.max_size)


def cloud_polygon_hausdorff(points, P: ConvexPolygon, pitch: float) -> float:
    """Hausdorff distance between a finite set and a convex polygon.

    The polygon side is evaluated on a lattice of pitch ``pitch`` inside P plus
    boundary samples, so the result is accurate to about ``pitch``.
    """
    pts = np.asarray(points, dtype=float)
    v = P.vertices
    if P.kind == "full":
        e = np.roll(v, -1, axis=0) - v
        rel = pts[:, None, :] - v[None, :, :]
        t = np.clip(np.einsum("pkj,kj->pk", rel, e) / np.einsum("kj,kj->k", e, e), 0, 1)
        foot = v[None] + t[..., None] * e[None]
        dist_edges = np.linalg.norm(pts[:, None, :] - foot, axis=2).min(axis=1)
        inside = np.all(e[None, :, 0] * rel[..., 1] - e[None, :, 1] * rel[..., 0] >= 0, axis=1)
        d_out = float(np.where(inside, 0.0, dist_edges).max())
        lo, hi = v.min(axis=0), v.max(axis=0)
        gx = np.arange(lo[0], hi[0] + pitch, pitch)
        gy = np.arange(lo[1], hi[1] + pitch, pitch)
        G = np.stack(np.meshgrid(gx, gy, indexing="ij"), -1).reshape(-1, 2)
        relg = G[:, None, :] - v[None]
        ing = np.all(e[None, :, 0] * relg[..., 1] - e[None, :, 1] * relg[..., 0] >= 0, axis=1)
        samples = [G[ing]]
        for a, b in zip(v, np.roll(v, -1, axis=0)):
            k = max(2, int(math.ceil(np.linalg.norm(b - a) / pitch)) + 1)
            samples.append(a + np.linspace(0, 1, k)[:, None] * (b - a))
        S = np.concatenate(samples)
    else:
        d_out = max(0.0, float(np.min(np.linalg.norm(pts[:, None, :] - v[None], axis=2), axis=1).max())) if P.kind == "point" else 0.0
        if P.kind == "segment":
            a, b = v
            t = np.clip((pts - a) @ (b - a) / ((b - a) @ (b - a)), 0, 1)
            d_out = float(np.linalg.norm(a + t[:, None] * (b - a) - pts, axis=1).max())
            k = max(2, int(math.ceil(np.linalg.norm(b - a) / pitch)) + 1)
            S = a + np.linspace(0, 1, k)[:, None] * (b - a)
        else:
            S = v
    d_in = float(cKDTree(pts).query(S)[0].max())
    return max(d_out, d_in)
