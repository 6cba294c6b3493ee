"""Exact planar convex bodies stored as counterclockwise vertex cycles.

Every operator here works on the vertex list directly. Degenerate bodies
(segments and points) are first-class and flow through all operators with the
limiting-case semantics of the definitions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .config import DEFAULT
from .geom import LineSubspace, RotationOp, reflect_point

TWO_PI = 2.0 * math.pi

FULL, SEGMENT, POINT = "full", "segment", "point"


class DegenerateBodyError(ValueError):
    pass


def _cross(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def _diameter_bound(v: np.ndarray) -> float:
    if len(v) < 2:
        return 0.0
    ext = v.max(axis=0) - v.min(axis=0)
    return float(math.hypot(ext[0], ext[1]))


def _every_other(mask: np.ndarray) -> np.ndarray:
    """Thin a cyclic boolean mask so that no two selected entries are adjacent."""
    out = mask.copy()
    k = len(mask)
    if k == 0 or not mask.any():
        return out
    if mask.all():
        out[1::2] = False
        if k % 2 == 1:
            out[-1] = False
        return out
    # roll so that index 0 is False: runs then never wrap around
    start = int(np.argmin(mask))
    m = np.roll(mask, -start)
    idx = np.arange(k)
    run_start = m & ~np.concatenate([[False], m[:-1]])
    first = np.maximum.accumulate(np.where(run_start, idx, 0))
    keep = m & ((idx - first) % 2 == 0)
    return np.roll(keep, start)


def _drop_flagged(v: np.ndarray, score_fn, max_passes: int = 50) -> np.ndarray:
    for _ in range(max_passes):
        if len(v) <= 3:
            break
        flag = score_fn(v)
        if not flag.any():
            break
        flag = _every_other(flag)
        v = v[~flag]
    return v


def _canonical(v: np.ndarray, collinear_area: float = DEFAULT.collinear_area):
    """Return (vertices, kind) for a convex vertex cycle given in either orientation."""
    v = np.asarray(v, dtype=float).reshape(-1, 2)
    if not np.all(np.isfinite(v)):
        raise ValueError("non-finite vertex")
    diam = _diameter_bound(v)
    if len(v) == 0:
        raise ValueError("empty polygon")
    if diam == 0.0:
        return v[:1].copy(), POINT
    dup = 1e-12 * diam
    # drop consecutive duplicates, cyclically
    keep = np.linalg.norm(v - np.roll(v, 1, axis=0), axis=1) > dup
    if not keep.any():
        return v[:1].copy(), POINT
    v = v[keep]
    area2 = float(np.sum(_cross(v, np.roll(v, -1, axis=0))))
    if area2 < 0:
        v = v[::-1]
        area2 = -area2
    if len(v) < 3 or area2 <= 2.0 * collinear_area * diam * diam:
        return _as_segment(v)
    tol = 2.0 * collinear_area * diam * diam

    def flat(w):
        c = _cross(w - np.roll(w, 1, axis=0), np.roll(w, -1, axis=0) - w)
        return c <= tol

    v = _drop_flagged(v, flat)
    if len(v) < 3:
        return _as_segment(v)
    return v, FULL


def _as_segment(v: np.ndarray):
    c = v.mean(axis=0)
    w = v - c
    _, _, vt = np.linalg.svd(w, full_matrices=False)
    t = w @ vt[0]
    a, b = v[int(np.argmin(t))], v[int(np.argmax(t))]
    if np.linalg.norm(b - a) <= 1e-12 * max(1.0, np.abs(v).max()):
        return a[None, :].copy(), POINT
    # store segments in lexicographic order for stable equality
    if (b[0], b[1]) < (a[0], a[1]):
        a, b = b, a
    return np.array([a, b]), SEGMENT


def monotone_hull(points) -> np.ndarray:
    """Andrew's monotone chain; returns CCW hull vertices without collinear points."""
    p = np.unique(np.asarray(points, dtype=float).reshape(-1, 2), axis=0)
    if len(p) <= 2:
        return p
    if len(p) > 256:
        # prune to qhull's vertices first; the exact chain below then runs on few points
        try:
            p = p[np.sort(ConvexHull(p).vertices)]
        except QhullError:
            pass
    pts = [tuple(q) for q in p]

    def half(seq):
        out = []
        for q in seq:
            while len(out) >= 2:
                (ax, ay), (bx, by) = out[-2], out[-1]
                if (bx - ax) * (q[1] - ay) - (by - ay) * (q[0] - ax) <= 0:
                    out.pop()
                else:
                    break
            out.append(q)
        return out

    lower = half(pts)
    upper = half(reversed(pts))
    return np.array(lower[:-1] + upper[:-1])


@dataclass(frozen=True, eq=False)
class ConvexPolygon:
    """Convex compact set in the plane: a CCW vertex cycle, a segment or a point."""

    vertices: np.ndarray
    kind: str = FULL

    def __init__(self, vertices, *, canonical: bool = True):
        if canonical:
            v, kind = _canonical(vertices)
        else:
            v = np.asarray(vertices, dtype=float).reshape(-1, 2)
            kind = FULL if len(v) >= 3 else (SEGMENT if len(v) == 2 else POINT)
        v = np.ascontiguousarray(v)
        v.flags.writeable = False
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "kind", kind)

    # -- constructors -----------------------------------------------------
    @classmethod
    def hull(cls, points) -> "ConvexPolygon":
        return cls(monotone_hull(points))

    @classmethod
    def point(cls, p) -> "ConvexPolygon":
        return cls(np.asarray(p, dtype=float)[None, :])

    @classmethod
    def segment(cls, a, b) -> "ConvexPolygon":
        return cls(np.array([a, b], dtype=float))

    @classmethod
    def regular(cls, k: int, radius: float = 1.0, phase: float = 0.0, center=(0.0, 0.0)) -> "ConvexPolygon":
        t = phase + TWO_PI * np.arange(k) / k
        return cls(np.column_stack([np.cos(t), np.sin(t)]) * radius + np.asarray(center, dtype=float))

    @classmethod
    def box(cls, x0: float, x1: float, y0: float, y1: float) -> "ConvexPolygon":
        return cls([[x0, y0], [x1, y0], [x1, y1], [x0, y1]])

    @classmethod
    def ellipse(cls, a: float, b: float, k: int = 512, tilt: float = 0.0) -> "ConvexPolygon":
        t = TWO_PI * np.arange(k) / k
        v = np.column_stack([a * np.cos(t), b * np.sin(t)])
        c, s = math.cos(tilt), math.sin(tilt)
        return cls(v @ np.array([[c, s], [-s, c]]))

    # -- basic properties -------------------------------------------------
    def __len__(self) -> int:
        return len(self.vertices)

    def __repr__(self) -> str:
        return f"ConvexPolygon(kind={self.kind!r}, n={len(self.vertices)})"

    @property
    def is_full(self) -> bool:
        return self.kind == FULL

    @cached_property
    def diameter(self) -> float:
        v = self.vertices
        if len(v) < 2:
            return 0.0
        if len(v) <= 64 or self.kind != FULL:
            d = v[:, None, :] - v[None, :, :]
            return float(np.sqrt((d ** 2).sum(-1).max()))
        # the diameter is attained at an antipodal pair: an edge endpoint and
        # the vertex supporting the opposite of that edge's normal
        phis, order = self._fan
        j = self.support_vertex_index(phis + math.pi)
        a, b = v[order], v[(order + 1) % len(v)]
        d = np.maximum(np.linalg.norm(a - v[j], axis=1), np.linalg.norm(b - v[j], axis=1))
        return float(d.max())

    @cached_property
    def area(self) -> float:
        if self.kind != FULL:
            return 0.0
        v = self.vertices
        return 0.5 * float(np.sum(_cross(v, np.roll(v, -1, axis=0))))

    @cached_property
    def perimeter(self) -> float:
        v = self.vertices
        if self.kind == POINT:
            return 0.0
        return float(np.linalg.norm(np.roll(v, -1, axis=0) - v, axis=1).sum())

    @cached_property
    def _fan(self):
        """Sorted outward edge-normal angles and the vertex starting each edge."""
        v = self.vertices
        if self.kind == POINT:
            return np.zeros(0), np.zeros(0, dtype=int)
        e = np.roll(v, -1, axis=0) - v
        phi = np.mod(np.arctan2(e[:, 1], e[:, 0]) - 0.5 * math.pi, TWO_PI)
        order = np.argsort(phi, kind="stable")
        return phi[order], order

    @cached_property
    def edge_normals(self) -> np.ndarray:
        return self._fan[0]

    def support_vertex_index(self, theta) -> np.ndarray:
        """Index of a vertex attaining the support value in each direction angle."""
        theta = np.mod(np.asarray(theta, dtype=float), TWO_PI)
        phis, order = self._fan
        if len(phis) == 0:
            return np.zeros(theta.shape, dtype=int)
        idx = np.searchsorted(phis, theta, side="left")
        return order[np.where(idx == len(phis), 0, idx)]

    def support(self, theta) -> np.ndarray:
        """Support function at direction angles (vectorized, exact)."""
        theta = np.asarray(theta, dtype=float)
        vi = self.vertices[self.support_vertex_index(theta)]
        return vi[..., 0] * np.cos(theta) + vi[..., 1] * np.sin(theta)

    def contains_point(self, p, tol: float = 1e-12) -> bool:
        p = np.asarray(p, dtype=float)
        if self.kind == POINT:
            return bool(np.linalg.norm(p - self.vertices[0]) <= tol)
        if self.kind == SEGMENT:
            a, b = self.vertices
            t = np.clip((p - a) @ (b - a) / ((b - a) @ (b - a)), 0.0, 1.0)
            return bool(np.linalg.norm(a + t * (b - a) - p) <= tol)
        v = self.vertices
        e = np.roll(v, -1, axis=0) - v
        lens = np.linalg.norm(e, axis=1)
        return bool(np.all(_cross(e, p - v) >= -tol * lens))

    def transform(self, matrix) -> "ConvexPolygon":
        m = np.asarray(matrix, dtype=float)
        return ConvexPolygon(self.vertices @ m.T)

    def translate(self, t) -> "ConvexPolygon":
        return _similar(self, self.vertices + np.asarray(t, dtype=float))

    def __neg__(self) -> "ConvexPolygon":
        return _similar(self, -self.vertices)


# -- measures ------------------------------------------------------------

@dataclass(frozen=True)
class BodyMeasures:
    area: float
    perimeter: float
    mean_width: float
    mean_width_quadrature: float


def mean_width_quadrature(P: ConvexPolygon, min_nodes: int = 512) -> float:
    """Mean width from (1/2pi) * integral of h(t) + h(t + pi), by Gauss-Legendre.

    The circle is cut at the edge normals so that the support function is a
    single sinusoid on every arc; at least ``min_nodes`` nodes are used.
    """
    cuts = np.unique(np.concatenate([[0.0, TWO_PI], P.edge_normals, np.mod(P.edge_normals + math.pi, TWO_PI)]))
    arcs = len(cuts) - 1
    m = max(2, -(-min_nodes // arcs))
    x, w = np.polynomial.legendre.leggauss(m)
    a, b = cuts[:-1, None], cuts[1:, None]
    t = 0.5 * (b - a) * x[None, :] + 0.5 * (a + b)
    vals = P.support(t) + P.support(t + math.pi)
    integral = float(np.sum(0.5 * (b - a) * (vals * w[None, :])))
    return integral / TWO_PI


def measures(P: ConvexPolygon) -> BodyMeasures:
    return BodyMeasures(P.area, P.perimeter, P.perimeter / math.pi, mean_width_quadrature(P))


def mean_width(P: ConvexPolygon) -> float:
    return P.perimeter / math.pi


def support_value(P: ConvexPolygon, u) -> float:
    u = np.asarray(u, dtype=float)
    return float(np.max(P.vertices @ u))


# -- maps ----------------------------------------------------------------

def _similar(P: ConvexPolygon, v: np.ndarray) -> ConvexPolygon:
    # an orientation-preserving similarity keeps a full polygon canonical
    if P.kind == FULL:
        return ConvexPolygon(v, canonical=False)
    return ConvexPolygon(v)


def reflect_polygon(P: ConvexPolygon, H: LineSubspace) -> ConvexPolygon:
    return _similar(P, reflect_point(P.vertices, H)[::-1])


def rotate_polygon(P: ConvexPolygon, R: RotationOp) -> ConvexPolygon:
    return _similar(P, R.apply(P.vertices))


def scale_polygon(P: ConvexPolygon, t: float) -> ConvexPolygon:
    if not t > 0:
        raise ValueError(f"scale factor must be positive, got {t}")
    return _similar(P, P.vertices * t)


def _edge_cycle(P: ConvexPolygon):
    """Start vertex (lowest, then leftmost) and edge vectors in angular order."""
    v = P.vertices
    if P.kind == POINT:
        return v[0], np.zeros((0, 2)), np.zeros(0)
    s = int(np.lexsort((v[:, 0], v[:, 1]))[0])
    v = np.roll(v, -s, axis=0)
    e = np.roll(v, -1, axis=0) - v
    ang = np.arctan2(e[:, 1], e[:, 0])
    ang = np.where(ang < 0, ang + TWO_PI, ang)
    # numerical safety: angles must be non-decreasing along the cycle
    ang = np.maximum.accumulate(ang)
    return v[0], e, ang


def minkowski_sum(P: ConvexPolygon, Q: ConvexPolygon) -> ConvexPolygon:
    """Minkowski sum by merging edge vectors in angular order."""
    p0, ep, ap = _edge_cycle(P)
    q0, eq, aq = _edge_cycle(Q)
    start = p0 + q0
    if len(ep) + len(eq) == 0:
        return ConvexPolygon.point(start)
    e = np.concatenate([ep, eq])
    order = np.argsort(np.concatenate([ap, aq]), kind="stable")
    e = e[order]
    verts = start + np.concatenate([np.zeros((1, 2)), np.cumsum(e[:-1], axis=0)])
    return ConvexPolygon(verts)


def minkowski_symmetrize(P: ConvexPolygon, H: LineSubspace) -> ConvexPolygon:
    """(P + R_H P) / 2."""
    return scale_polygon(minkowski_sum(P, reflect_polygon(P, H)), 0.5)


def central_symmetrize(P: ConvexPolygon) -> ConvexPolygon:
    """(P - P) / 2."""
    return scale_polygon(minkowski_sum(P, -P), 0.5)


def _frame(H: LineSubspace):
    if H.ambient != 2 or H.dim != 1:
        raise ValueError("planar symmetrizations need a line in R^2")
    d = H.basis[0]
    return d, np.array([-d[1], d[0]])


def _chains(x: np.ndarray, y: np.ndarray):
    """Split a CCW cycle (in a frame where H is the x-axis) into lower/upper chains.

    Both chains are returned with increasing abscissae and share the extreme
    abscissae exactly.
    """
    k = len(x)
    xmin, xmax = float(x.min()), float(x.max())
    tol = 1e-13 * (xmax - xmin)
    left = x <= xmin + tol
    right = x >= xmax - tol
    x = np.where(left, xmin, np.where(right, xmax, x))
    il = np.flatnonzero(left)
    ir = np.flatnonzero(right)
    i_ll = int(il[np.argmin(y[il])])
    i_lh = int(il[np.argmax(y[il])])
    i_rl = int(ir[np.argmin(y[ir])])
    i_rh = int(ir[np.argmax(y[ir])])
    lo = np.arange(i_ll, i_ll + ((i_rl - i_ll) % k) + 1) % k
    up = np.arange(i_rh, i_rh + ((i_lh - i_rh) % k) + 1) % k
    up = up[::-1]
    xl, yl = np.maximum.accumulate(x[lo]), y[lo]
    xu, yu = np.maximum.accumulate(x[up]), y[up]
    return (xl, yl), (xu, yu), (xmin, xmax)


def _merge_abscissae(a: np.ndarray, b: np.ndarray, span: float) -> np.ndarray:
    xs = np.sort(np.concatenate([a, b]))
    keep = np.concatenate([[True], np.diff(xs) > 1e-13 * span])
    xs = xs[keep]
    xs[-1] = max(xs[-1], a[-1])
    return xs


def _assemble_symmetric(xs, half, d, n) -> ConvexPolygon:
    low = np.column_stack([xs, -half])
    up = np.column_stack([xs[::-1], half[::-1]])
    fr = np.concatenate([low, up])
    return ConvexPolygon(fr[:, :1] * d + fr[:, 1:] * n)


def _degenerate_symmetral(P: ConvexPolygon, d, n) -> ConvexPolygon:
    x, y = P.vertices @ d, P.vertices @ n
    if P.kind == POINT:
        return ConvexPolygon.point(x[0] * d)
    span = abs(x[1] - x[0])
    length = abs(y[1] - y[0])
    if span <= 1e-12 * max(length, 1e-300):
        # a single chord orthogonal to H: recentre it
        c = x[0] * d
        return ConvexPolygon.segment(c - 0.5 * length * n, c + 0.5 * length * n)
    # every chord is a point: each is replaced by its foot on H
    return ConvexPolygon.segment(x.min() * d, x.max() * d)


def steiner_symmetrize(P: ConvexPolygon, H: LineSubspace) -> ConvexPolygon:
    """Recentre every chord orthogonal to H on H, keeping its length."""
    d, n = _frame(H)
    if P.kind != FULL:
        return _degenerate_symmetral(P, d, n)
    x, y = P.vertices @ d, P.vertices @ n
    (xl, yl), (xu, yu), (xmin, xmax) = _chains(x, y)
    xs = _merge_abscissae(xl, xu, xmax - xmin)
    half = 0.5 * np.maximum(np.interp(xs, xu, yu) - np.interp(xs, xl, yl), 0.0)
    return _assemble_symmetric(xs, half, d, n)


def _section_bounds(xc: np.ndarray, yc: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """Evaluate the piecewise linear chain (xc, yc) at abscissae xs by locating segments."""
    j = np.clip(np.searchsorted(xc, xs, side="right") - 1, 0, len(xc) - 2)
    x0, x1 = xc[j], xc[j + 1]
    y0, y1 = yc[j], yc[j + 1]
    w = x1 - x0
    t = np.divide(xs - x0, w, out=np.zeros_like(xs), where=w > 0)
    return y0 + np.clip(t, 0.0, 1.0) * (y1 - y0)


def fiber_symmetrize(P: ConvexPolygon, H: LineSubspace) -> ConvexPolygon:
    """Central Minkowski symmetrization of every section orthogonal to H.

    For lines in the plane this coincides with Steiner symmetrization; the
    sections are computed here by locating each breakpoint on both chains and
    replacing the section [a, b] by (S + R S) / 2 = [-(b - a)/2, (b - a)/2].
    """
    d, n = _frame(H)
    if P.kind != FULL:
        return _degenerate_symmetral(P, d, n)
    x, y = P.vertices @ d, P.vertices @ n
    (xl, yl), (xu, yu), (xmin, xmax) = _chains(x, y)
    xs = _merge_abscissae(xl, xu, xmax - xmin)
    lo = _section_bounds(xl, yl, xs)
    hi = _section_bounds(xu, yu, xs)
    # M_x [lo, hi] = ([lo, hi] + [-hi, -lo]) / 2
    half = np.maximum(0.5 * (hi - lo), 0.0)
    return _assemble_symmetric(xs, half, d, n)


# -- metrics -------------------------------------------------------------

def _arc_abs_max(dx, dy, a, b) -> np.ndarray:
    """max |dx cos t + dy sin t| for t in [a, b] (vectorized over arcs)."""
    fa = np.abs(dx * np.cos(a) + dy * np.sin(a))
    fb = np.abs(dx * np.cos(b) + dy * np.sin(b))
    r = np.hypot(dx, dy)
    phi = np.arctan2(dy, dx)
    best = np.maximum(fa, fb)
    for shift in (0.0, math.pi):
        c = np.mod(phi + shift - a, TWO_PI)
        inside = c <= (b - a)
        best = np.where(inside, np.maximum(best, r), best)
    return best


def hausdorff_distance(P: ConvexPolygon, Q: ConvexPolygon) -> float:
    """sup over the circle of |h_P - h_Q|, exact.

    On each arc of the merged normal fans both support functions are single
    sinusoids, so the difference is (v - w) . u(t) whose maximum modulus on the
    arc has a closed form.
    """
    cuts = np.unique(np.concatenate([[0.0, TWO_PI], P.edge_normals, Q.edge_normals]))
    a, b = cuts[:-1], cuts[1:]
    mid = 0.5 * (a + b)
    diff = P.vertices[P.support_vertex_index(mid)] - Q.vertices[Q.support_vertex_index(mid)]
    return float(_arc_abs_max(diff[:, 0], diff[:, 1], a, b).max())


def support_gap(P: ConvexPolygon, Q: ConvexPolygon) -> float:
    """max over the circle of h_P - h_Q (positive part); 0 iff P is inside Q."""
    cuts = np.unique(np.concatenate([[0.0, TWO_PI], P.edge_normals, Q.edge_normals]))
    a, b = cuts[:-1], cuts[1:]
    mid = 0.5 * (a + b)
    diff = P.vertices[P.support_vertex_index(mid)] - Q.vertices[Q.support_vertex_index(mid)]
    dx, dy = diff[:, 0], diff[:, 1]
    fa = dx * np.cos(a) + dy * np.sin(a)
    fb = dx * np.cos(b) + dy * np.sin(b)
    best = np.maximum(fa, fb)
    inside = np.mod(np.arctan2(dy, dx) - a, TWO_PI) <= (b - a)
    best = np.where(inside, np.hypot(dx, dy), best)
    return max(0.0, float(best.max()))


def clip_convex(P: ConvexPolygon, Q: ConvexPolygon) -> np.ndarray:
    """Vertices of P intersected with Q (Sutherland-Hodgman, Q convex)."""
    out = [tuple(p) for p in P.vertices]
    q = Q.vertices
    for i in range(len(q)):
        if not out:
            break
        a, b = q[i], q[(i + 1) % len(q)]
        e = b - a
        pts = np.array(out)
        side = e[0] * (pts[:, 1] - a[1]) - e[1] * (pts[:, 0] - a[0])
        new = []
        m = len(pts)
        for j in range(m):
            s0, s1 = side[j], side[(j + 1) % m]
            p0, p1 = pts[j], pts[(j + 1) % m]
            if s0 >= 0:
                new.append(tuple(p0))
            if (s0 >= 0) != (s1 >= 0):
                t = s0 / (s0 - s1)
                new.append(tuple(p0 + t * (p1 - p0)))
        out = new
    return np.array(out).reshape(-1, 2)


def intersection_area(P: ConvexPolygon, Q: ConvexPolygon) -> float:
    if P.kind != FULL or Q.kind != FULL:
        return 0.0
    v = clip_convex(P, Q)
    if len(v) < 3:
        return 0.0
    return 0.5 * abs(float(np.sum(_cross(v, np.roll(v, -1, axis=0)))))


def symmetric_difference_area(P: ConvexPolygon, Q: ConvexPolygon) -> float:
    return max(0.0, P.area + Q.area - 2.0 * intersection_area(P, Q))


def steiner_point(P: ConvexPolygon) -> np.ndarray:
    """Mean point of the support function: sum of vertices weighted by exterior angle / 2pi."""
    if P.kind == POINT:
        return P.vertices[0].copy()
    phis, order = P._fan
    ext = np.diff(np.concatenate([phis, [phis[0] + TWO_PI]]))
    # edge order[j] ends at vertex order[j] + 1, which is turned by ext[j] at the next edge
    nxt = (order + 1) % len(P.vertices)
    return (ext[:, None] * P.vertices[nxt]).sum(axis=0) / TWO_PI


def ball_gap(P: ConvexPolygon) -> float:
    """max h - min h after centring at the Steiner point; zero exactly for discs."""
    if P.kind != FULL:
        raise DegenerateBodyError("ball_gap needs a full-dimensional polygon")
    c = steiner_point(P)
    v = P.vertices - c
    hmax = float(np.linalg.norm(v, axis=1).max())
    phis, order = P._fan
    hmin = float((v[order, 0] * np.cos(phis) + v[order, 1] * np.sin(phis)).min())
    return hmax - hmin


def distance_to_origin(P: ConvexPolygon) -> float:
    v = P.vertices
    if P.contains_point(np.zeros(2)):
        return 0.0
    if P.kind == POINT:
        return float(np.linalg.norm(v[0]))
    w = np.roll(v, -1, axis=0)
    e = w - v
    t = np.clip(-np.einsum("ij,ij->i", v, e) / np.maximum(np.einsum("ij,ij->i", e, e), 1e-300), 0.0, 1.0)
    return float(np.linalg.norm(v + t[:, None] * e, axis=1).min())


def support_range(P: ConvexPolygon) -> tuple[float, float]:
    """Minimum and maximum of the support function over the unit circle.

    The maximum is the largest vertex norm. If the origin lies in P the
    support function is non-negative and concave along each arc of the normal
    fan, so the minimum sits at an edge normal; otherwise it is minus the
    distance from the origin to P.
    """
    v = P.vertices
    hmax = float(np.linalg.norm(v, axis=1).max())
    d = distance_to_origin(P)
    if d > 0.0:
        return -d, hmax
    if P.kind == POINT:
        return 0.0, hmax
    if P.kind == SEGMENT:
        return 0.0, hmax
    phis, order = P._fan
    return float((v[order, 0] * np.cos(phis) + v[order, 1] * np.sin(phis)).min()), hmax


def line_section(P: ConvexPolygon, d) -> tuple[float, float] | None:
    """Parameter interval {t : t d in P} for the line through the origin along unit d."""
    d = np.asarray(d, dtype=float)
    v = P.vertices
    if P.kind != FULL:
        if P.kind == POINT:
            p = v[0]
            return (float(p @ d),) * 2 if abs(_cross(d, p)) <= 1e-12 else None
        a, b = v
        ca, cb = float(_cross(d, a)), float(_cross(d, b))
        scale = 1e-12 * max(1.0, np.abs(v).max())
        if abs(ca) <= scale and abs(cb) <= scale:
            ta, tb = float(a @ d), float(b @ d)
            return min(ta, tb), max(ta, tb)
        if ca * cb > 0:
            return None
        s = ca / (ca - cb)
        t = float((a + s * (b - a)) @ d)
        return t, t
    e = np.roll(v, -1, axis=0) - v
    # inside: cross(e, t d - v) >= 0, i.e. t * cross(e, d) >= cross(e, v)
    c = _cross(e, np.broadcast_to(d, e.shape))
    r = _cross(e, v)
    lo, hi = -math.inf, math.inf
    pos, neg, zero = c > 0, c < 0, c == 0
    if np.any(zero & (r > 0)):
        return None
    if pos.any():
        lo = float((r[pos] / c[pos]).max())
    if neg.any():
        hi = float((r[neg] / c[neg]).min())
    if lo > hi:
        return None
    return lo, hi


def section_length(P: ConvexPolygon, d) -> float:
    iv = line_section(P, d)
    return 0.0 if iv is None else iv[1] - iv[0]


def simplify(P: ConvexPolygon, eta: float, max_passes: int = 3) -> tuple[ConvexPolygon, float]:
    """Drop vertices lying within ``eta`` of the chord through their neighbours.

    Returns the simplified polygon and a bound on the Hausdorff deviation.
    Only non-adjacent vertices are removed per pass.
    """
    if P.kind != FULL or eta <= 0 or len(P) <= 8:
        return P, 0.0
    v = np.asarray(P.vertices)
    dev = 0.0
    for _ in range(max_passes):
        if len(v) <= 8:
            break
        prev, nxt = np.roll(v, 1, axis=0), np.roll(v, -1, axis=0)
        chord = nxt - prev
        h = _cross(chord, v - prev) / np.maximum(np.linalg.norm(chord, axis=1), 1e-300)
        flag = np.abs(h) < eta
        if not flag.any():
            break
        flag = _every_other(flag)
        dev = dev + float(np.abs(h[flag]).max())
        v = v[~flag]
    if dev == 0.0:
        return P, 0.0
    # dropping vertices of a strictly convex cycle keeps it strictly convex
    return ConvexPolygon(v, canonical=False), dev


def random_polygon(rng: np.random.Generator, n: int = 12, radius: float = 1.0) -> ConvexPolygon:
    """Hull of ``n`` uniform points in a disc, re-drawn until full-dimensional."""
    while True:
        r = radius * np.sqrt(rng.uniform(size=n))
        t = rng.uniform(0, TWO_PI, size=n)
        P = ConvexPolygon.hull(np.column_stack([r * np.cos(t), r * np.sin(t)]))
        if P.kind == FULL and P.area > 1e-3 * radius * radius:
            return P
