"""Symmetrization processes: execution, traces, convergence tests and certificates.

A process applies ``op_{H_m}`` for m = k, k+1, ... to a starting body. With
rotation correction the iterate after step m is R_m K_m, computed
incrementally as A_m op_{R_{m-1} H_m} L_{m-1} so that only one rotation is
applied per step.
"""

from __future__ import annotations

import csv
import io
import math
from collections import deque
from dataclasses import dataclass, field, fields, replace
from typing import Callable, Iterator

import numpy as np

from . import grid as gr
from . import polygon as pg
from . import raster as rs
from .config import DEFAULT, Tolerances
from .geom import LineSubspace, RotationOp, rotation_between
from .sequences import AngleSequence, DirectionSequence, gamma_product

OPERATORS = ("steiner", "minkowski", "fiber")
REPRESENTATIONS = ("polygon", "grid", "raster", "cloud")
COMPATIBLE = {
    "polygon": {"steiner", "minkowski", "fiber"},
    "grid": {"minkowski"},
    "raster": {"steiner"},
    "cloud": {"minkowski"},
}
CONVERGENT, NON_CAUCHY, INCONCLUSIVE, DIVERGENT = "convergent", "non-Cauchy", "inconclusive", "divergent"
TRACE_COLUMNS = ("step", "beta", "dh_prev", "dh_ref", "area", "mean_width",
                 "min_support", "max_support", "resample_err")


class RepresentationError(ValueError):
    pass


class ShortTraceError(ValueError):
    pass


class StepCapacityError(rs.CapacityError):
    """A capacity error annotated with the step at which it happened."""

    def __init__(self, step: int, cause: Exception):
        super().__init__(f"step {step}: {cause}")
        self.step = step


def representation_of(body) -> str:
    if isinstance(body, pg.ConvexPolygon):
        return "polygon"
    if isinstance(body, gr.SupportGrid):
        return "grid"
    if isinstance(body, rs.RasterSet):
        return "raster"
    if isinstance(body, rs.PointCloud):
        return "cloud"
    raise RepresentationError(f"unsupported body type {type(body).__name__}")


@dataclass(frozen=True, eq=False)
class ProcessSpec:
    operator: str
    representation: str
    sequence: DirectionSequence
    start_index: int = 1
    rotation_correction: str = "none"
    max_steps: int | None = None
    tolerances: Tolerances = DEFAULT
    # restore the conserved functional (area for Steiner/fiber, mean width for
    # Minkowski) after simplification; the displacement is logged
    compensate: bool = True
    snap: float = 1e-4
    reference: object = None
    # number of trailing iterates kept in memory; None keeps 2 * window + 1, 0 keeps all
    keep: int | None = None

    def __post_init__(self):
        if self.operator not in OPERATORS:
            raise RepresentationError(f"unknown operator {self.operator!r}")
        if self.representation not in REPRESENTATIONS:
            raise RepresentationError(f"unknown representation {self.representation!r}")
        if self.operator not in COMPATIBLE[self.representation]:
            raise RepresentationError(
                f"{self.operator} symmetrization is not available on the {self.representation} representation")
        if self.rotation_correction not in ("none", "schedule"):
            raise RepresentationError(f"rotation_correction must be 'none' or 'schedule'")
        if self.start_index < 1:
            raise ValueError("start_index must be at least 1")
        if self.start_index > len(self.sequence):
            raise ValueError("start_index beyond the end of the sequence")
        if self.max_steps is not None and self.max_steps < 1:
            raise ValueError("max_steps must be at least 1")

    @property
    def last_index(self) -> int:
        end = len(self.sequence)
        if self.max_steps is not None:
            end = min(end, self.start_index + self.max_steps - 1)
        return end

    @property
    def steps(self) -> int:
        return self.last_index - self.start_index + 1

    @property
    def window(self) -> int:
        return self.tolerances.window

    @property
    def tol(self) -> float:
        return self.tolerances.tol_raster if self.representation == "raster" else self.tolerances.tol_polygon


# -- representation adapters ------------------------------------------------

class _Adapter:
    name = ""

    def __init__(self, spec: ProcessSpec):
        self.spec = spec

    def apply(self, body, H: LineSubspace):
        raise NotImplementedError

    def rotate(self, body, A: RotationOp):
        raise NotImplementedError

    def distance(self, a, b) -> float:
        raise NotImplementedError

    def measures(self, body) -> tuple[float, float, float, float]:
        raise NotImplementedError

    def section(self, body, H: LineSubspace) -> float:
        raise NotImplementedError


class _PolygonAdapter(_Adapter):
    name = "polygon"

    def apply(self, P, H):
        op = self.spec.operator
        if op == "minkowski":
            Q = pg.minkowski_symmetrize(P, H)
        elif op == "fiber":
            Q = pg.fiber_symmetrize(P, H)
        else:
            Q = pg.steiner_symmetrize(P, H)
        err = 0.0
        eta = self.spec.tolerances.simplify
        if eta > 0 and Q.kind == pg.FULL and len(Q) > self.spec.tolerances.simplify_above:
            Q, err = pg.simplify(Q, eta * Q.diameter)
        if self.spec.compensate and Q.kind == pg.FULL and P.kind == pg.FULL:
            Q, shift = self._compensate(P, Q, H)
            err += shift
        return Q, err

    def _compensate(self, P, Q, H):
        if self.spec.operator == "minkowski":
            f = P.perimeter / Q.perimeter
            if f == 1.0:
                return Q, 0.0
            c = pg.steiner_point(Q)
            v = Q.vertices - c
            return pg.ConvexPolygon(c + f * v, canonical=False), abs(f - 1.0) * float(np.linalg.norm(v, axis=1).max())
        f = P.area / Q.area
        if f == 1.0:
            return Q, 0.0
        n = H.normal
        y = Q.vertices @ n
        # stretch along the normal of H: keeps H-symmetry and restores the area
        M = np.eye(2) + (f - 1.0) * np.outer(n, n)
        return pg.ConvexPolygon(Q.vertices @ M.T, canonical=False), abs(f - 1.0) * float(np.abs(y).max())

    def rotate(self, P, A):
        return pg.rotate_polygon(P, A), 0.0

    def distance(self, a, b):
        return pg.hausdorff_distance(a, b)

    def measures(self, P):
        lo, hi = pg.support_range(P)
        return P.area, pg.mean_width(P), lo, hi

    def section(self, P, H):
        return pg.section_length(P, H.basis[0])


class _GridAdapter(_Adapter):
    name = "grid"

    def apply(self, G, H):
        out = gr.minkowski_symmetrize_grid(G, H)
        return out, out.interp_error - G.interp_error

    def rotate(self, G, A):
        out = gr.rotate_grid(G, A)
        return out, out.interp_error - G.interp_error

    def distance(self, a, b):
        return gr.hausdorff_supnorm(a, b)

    def measures(self, G):
        lo, hi = gr.support_extremes(G)
        return math.nan, gr.mean_width_quadrature(G), lo, hi

    def section(self, G, H):
        raise RepresentationError("sections are not available on support grids")


class _RasterAdapter(_Adapter):
    name = "raster"

    def apply(self, S, H):
        out = rs.steiner_symmetrize_raster(S, H)
        a0 = rs.raster_area(S)
        return out, abs(rs.raster_area(out) - a0) / a0

    def rotate(self, S, A):
        if A.dim != 2:
            raise RepresentationError("rasters are planar")
        return S.rotated(A.angle), 0.0

    def distance(self, a, b):
        return rs.raster_hausdorff(a, b)

    def measures(self, S):
        hull = rs.convex_hull_raster(S)
        lo, hi = pg.support_range(hull)
        return rs.raster_area(S), pg.mean_width(hull), lo, hi

    def section(self, S, H):
        delta = (S.angle - H.angle) / math.pi
        if abs(delta - round(delta)) > 1e-12:
            raise RepresentationError("raster section needs a frame aligned with the line")
        return rs.axis_section_length(S)


class _CloudAdapter(_Adapter):
    name = "cloud"

    def apply(self, C, H):
        out = rs.minkowski_symmetrize_cloud(C, H, self.spec.snap)
        return out, self.spec.snap * math.sqrt(0.5)

    def rotate(self, C, A):
        return rs.PointCloud(A.apply(C.points), C.max_size), 0.0

    def distance(self, a, b):
        from scipy.spatial import cKDTree
        d1 = cKDTree(b.points).query(a.points)[0].max()
        d2 = cKDTree(a.points).query(b.points)[0].max()
        return float(max(d1, d2))

    def measures(self, C):
        hull = C.hull()
        lo, hi = pg.support_range(hull)
        return hull.area, pg.mean_width(hull), lo, hi

    def section(self, C, H):
        return pg.section_length(C.hull(), H.basis[0])


_ADAPTERS = {"polygon": _PolygonAdapter, "grid": _GridAdapter, "raster": _RasterAdapter, "cloud": _CloudAdapter}


def adapter(spec: ProcessSpec) -> _Adapter:
    return _ADAPTERS[spec.representation](spec)


# -- execution ---------------------------------------------------------------

@dataclass(frozen=True)
class StepState:
    step: int
    beta: float
    line: LineSubspace  # the line actually used (rotated under correction)
    body: object
    resample_err: float


def _e1(n: int) -> np.ndarray:
    e = np.zeros(n)
    e[0] = 1.0
    return e


def process_steps(body, spec: ProcessSpec) -> Iterator[StepState]:
    """Yield the iterates of the process one step at a time."""
    rep = representation_of(body)
    if rep != spec.representation:
        raise RepresentationError(f"body is a {rep} but the spec expects a {spec.representation}")
    ad = adapter(spec)
    D = spec.sequence
    k = spec.start_index
    corrected = spec.rotation_correction == "schedule"
    U = D.normals
    R = RotationOp.identity(2)
    if corrected:
        # R_{k-1} from the start of the sequence, so that L_{k-1} = R_{k-1} K
        for m in range(1, k):
            R = rotation_between(R.apply(U[m]), _e1(2)) @ R
        if k > 1:
            body, _ = ad.rotate(body, R)
    for m in range(k, spec.last_index + 1):
        try:
            if corrected:
                u = R.apply(U[m])
                A = rotation_between(u, _e1(2))
                out, err = ad.apply(body, LineSubspace.orthogonal_to(u))
                out, err2 = ad.rotate(out, A)
                R = A @ R
                err += err2
                line = LineSubspace.orthogonal_to(A.apply(u))
            else:
                line = D.line(m)
                out, err = ad.apply(body, line)
        except rs.CapacityError as exc:
            raise StepCapacityError(m, exc) from exc
        body = out
        yield StepState(m, float(D.betas[m]), line, body, float(err))


@dataclass
class StepRecord:
    step: int
    beta: float
    dh_prev: float
    dh_ref: float
    area: float
    mean_width: float
    min_support: float
    max_support: float
    resample_err: float


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


@dataclass(eq=False)
class ProcessTrace:
    spec: ProcessSpec
    records: list[StepRecord]
    iterates: deque
    initial: object
    extras: dict = field(default_factory=dict)
    header: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.records)

    @property
    def final(self):
        return self.iterates[-1][1]

    def column(self, name: str) -> np.ndarray:
        if name not in TRACE_COLUMNS:
            raise KeyError(name)
        return np.array([getattr(r, name) for r in self.records], dtype=float)

    def to_csv(self, target=None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(TRACE_COLUMNS)
        for r in self.records:
            w.writerow([_fmt(getattr(r, c)) for c in TRACE_COLUMNS])
        text = buf.getvalue()
        if target is not None:
            with open(target, "w", newline="") as fh:
                fh.write(text)
        return text

    def monotonicity_violations(self, rel_tol: float = 1e-9) -> list[str]:
        """Steps where area decreased or mean width increased beyond ``rel_tol``."""
        out = []
        area, width = self.column("area"), self.column("mean_width")
        steps = self.column("step").astype(int)
        for name, x, sign in (("area", area, 1.0), ("mean_width", width, -1.0)):
            if np.all(np.isnan(x)):
                continue
            d = sign * np.diff(x)
            scale = np.maximum(np.abs(x[:-1]), 1e-300)
            for i in np.flatnonzero(d < -rel_tol * scale):
                out.append(f"{name} {'decreased' if sign > 0 else 'increased'} at step {steps[i + 1]} "
                           f"by {abs(d[i]) / scale[i]:.3g} (relative)")
        return out


def run_process(body, spec: ProcessSpec, probe: Callable | None = None) -> ProcessTrace:
    """Run the process and record every step.

    ``probe(state)`` may return a dict of extra per-step values; they are
    collected in ``trace.extras``.
    """
    rep = representation_of(body)
    if rep != spec.representation:
        raise RepresentationError(f"body is a {rep} but the process expects a {spec.representation}")
    ad = adapter(spec)
    keep = spec.keep if spec.keep is not None else 2 * spec.window + 1
    its = deque(maxlen=keep or None)
    ref = spec.reference
    a, w, lo, hi = ad.measures(body)
    d_ref = ad.distance(body, ref) if ref is not None else math.nan
    beta0 = float(spec.sequence.betas[spec.start_index - 1])
    records = [StepRecord(spec.start_index - 1, beta0, math.nan, d_ref, a, w, lo, hi, 0.0)]
    its.append((spec.start_index - 1, body))
    extras: dict[str, list] = {}
    prev = body
    for st in process_steps(body, spec):
        a, w, lo, hi = ad.measures(st.body)
        d_ref = ad.distance(st.body, ref) if ref is not None else math.nan
        records.append(StepRecord(st.step, st.beta, ad.distance(st.body, prev), d_ref, a, w, lo, hi,
                                  st.resample_err))
        its.append((st.step, st.body))
        if probe is not None:
            for key, val in (probe(st) or {}).items():
                extras.setdefault(key, []).append(val)
        prev = st.body
    header = {"operator": spec.operator, "representation": spec.representation,
              "start_index": spec.start_index, "rotation_correction": spec.rotation_correction,
              "window": spec.window, "tol": spec.tol}
    return ProcessTrace(spec, records, its, body, extras, header)


# -- convergence -------------------------------------------------------------

@dataclass(frozen=True)
class ConvergenceReport:
    verdict: str
    window: int
    tol: float
    floor: float
    spread_upper: np.ndarray
    spread_lower: np.ndarray

    @property
    def max_spread(self) -> float:
        return float(self.spread_upper.max())


def _pairwise_grid(bodies) -> np.ndarray:
    V = np.stack([b.values for b in bodies])
    n = len(V)
    D = np.zeros((n, n))
    for i in range(n):
        D[i] = np.abs(V - V[i]).max(axis=1)
    return D


def detect_convergence(T: ProcessTrace, window: int | None = None, tol: float | None = None,
                       floor: float | None = None) -> ConvergenceReport:
    """Numerical Cauchy test on the trailing iterates of a trace.

    For each of the ``window + 1`` trailing windows of ``window`` consecutive
    iterates the spread (largest pairwise distance) is bracketed. Exact
    pairwise distances are used for support grids; otherwise the bracket comes
    from distances to the last iterate, the triangle inequality and the
    recorded consecutive distances. The verdict is convergent when every upper
    bound is below ``tol`` and non-Cauchy when every lower bound exceeds
    ``floor`` (default 10 * tol).
    """
    w = window or T.spec.window
    tol = T.spec.tol if tol is None else tol
    floor = 10.0 * tol if floor is None else floor
    its = list(T.iterates)
    if len(its) < 2 * w or len(T.records) < 2 * w:
        raise ShortTraceError(f"need at least {2 * w} retained iterates, have {len(its)}")
    its = its[-2 * w:]
    bodies = [b for _, b in its]
    n = len(bodies)
    ad = adapter(T.spec)
    consec = np.array([r.dh_prev for r in T.records[-n:]])
    if T.spec.representation == "grid":
        D = _pairwise_grid(bodies)
        exact = True
    else:
        d_last = np.array([ad.distance(b, bodies[-1]) for b in bodies])
        exact = False
    up, low = [], []
    for j in range(w - 1, n):
        sl = slice(j - w + 1, j + 1)
        if exact:
            s = float(D[sl, sl].max())
            up.append(s)
            low.append(s)
            continue
        dl = d_last[sl]
        u = 2.0 * float(dl.max()) if j < n - 1 else float(dl.max())
        lower = max(float(np.nanmax(consec[j - w + 2:j + 1])) if w > 1 else 0.0,
                    float(dl.max() - dl.min()))
        if j == n - 1:
            lower = max(lower, float(dl.max()))
        up.append(u)
        low.append(lower)
    up, low = np.array(up), np.array(low)
    if np.all(up < tol):
        verdict = CONVERGENT
    elif np.all(low > floor):
        verdict = NON_CAUCHY
    else:
        verdict = INCONCLUSIVE
    return ConvergenceReport(verdict, w, tol, floor, up, low)


def window_spread_lower(T: ProcessTrace, window: int) -> np.ndarray:
    """Lower bounds on the spread of every window of ``window`` retained iterates.

    Uses the distance between the first and last iterate of each window and
    the recorded consecutive distances. Needs the trace to keep its iterates.
    """
    its = [b for _, b in T.iterates]
    if len(its) < window:
        raise ShortTraceError("not enough retained iterates")
    ad = adapter(T.spec)
    steps = [s for s, _ in T.iterates]
    by_step = {r.step: r.dh_prev for r in T.records}
    out = []
    for j in range(window - 1, len(its)):
        i = j - window + 1
        ends = ad.distance(its[i], its[j])
        cons = [by_step[s] for s in steps[i + 1:j + 1]]
        out.append(max(ends, max(cons) if cons else 0.0))
    return np.array(out)


# -- divergence certificate -------------------------------------------------

@dataclass
class DivergenceCertificate:
    gamma: float
    gamma_lower: float
    ell: np.ndarray
    ell_bound: np.ndarray
    functional: str
    conserved_value: float
    threshold: float
    lower_gate: float
    dense: bool
    coverage: dict
    verdict: str
    reasons: list[str]
    trace: ProcessTrace | None = None
    window_spreads: np.ndarray | None = None

    def summary(self) -> str:
        return (f"gamma={self.gamma:.10g} gamma_lower={self.gamma_lower:.10g} "
                f"{self.functional}={self.conserved_value:.10g} threshold={self.threshold:.10g} "
                f"liminf_ell={float(np.min(self.ell[len(self.ell) // 2:])) if len(self.ell) else math.nan:.6g}")


def _initial_section(body, H: LineSubspace, length: float) -> bool:
    """Whether the body contains the centred segment of given length on H."""
    d = H.basis[0]
    if isinstance(body, pg.ConvexPolygon):
        iv = pg.line_section(body, d)
        return iv is not None and iv[0] <= -0.5 * length + 1e-12 and iv[1] >= 0.5 * length - 1e-12
    if isinstance(body, rs.RasterSet):
        t = np.linspace(-0.5 * length, 0.5 * length, int(4 * length / body.cell_size) + 1)
        pts = t[:, None] * d[None, :]
        c, s = math.cos(body.angle), math.sin(body.angle)
        loc = pts @ np.array([[c, -s], [s, c]]) / body.cell_size
        # points on cell boundaries belong to either neighbour (cells are closed)
        ok = np.zeros(len(pts), dtype=bool)
        occ = {tuple(x) for x in body.cells().tolist()}
        for di in (0.0, -1e-9):
            for dj in (0.0, -1e-9):
                idx = np.floor(loc + np.array([di, dj])).astype(int)
                ok |= np.array([tuple(x) in occ for x in idx.tolist()])
        return bool(ok.all())
    if isinstance(body, rs.PointCloud):
        return _initial_section(body.hull(), H, length)
    return False


def divergence_certificate(body, A: AngleSequence, spec: ProcessSpec, *, segment_length: float = 1.0,
                           eps: float | None = None, spread_window: int | None = None) -> DivergenceCertificate:
    """Package the conserved-functional argument against convergence as data.

    The body must contain a centred segment of ``segment_length`` on the line
    H_{k-1}. Along the run the section l_m of the iterate on H_m is measured
    and compared with the chain l_m >= l_{m-1} cos(alpha_m). The verdict is
    divergent only when the conserved functional is below the ball threshold
    forced by sections of length gamma in every direction, the sections stay
    above gamma (1 - eps), and the run turned the lines through at least a
    half turn (or visited both endpoints of an oscillation twice).
    """
    reasons: list[str] = []
    functional = "mean_width" if spec.operator == "minkowski" else "area"
    ok_seq = A.kind == "oscillating" or (A.sum_diverges and A.sumsq_converges)
    empty = np.zeros(0)
    if not ok_seq:
        reasons.append("angle sequence must have divergent sum and summable squares "
                       f"(kind {A.kind}: sum diverges={A.sum_diverges}, squares converge={A.sumsq_converges})")
    if spec.rotation_correction != "none":
        reasons.append("certificate applies to the uncorrected process")
    if reasons:
        return DivergenceCertificate(math.nan, math.nan, empty, empty, functional, math.nan, math.nan,
                                     math.nan, A.sum_diverges, {}, INCONCLUSIVE, reasons)
    if eps is None:
        eps = 0.02 if spec.representation == "raster" else 1e-9
    ad = adapter(spec)
    k = spec.start_index
    D = spec.sequence
    H0 = D.line(k - 1)
    if not _initial_section(body, H0, segment_length):
        reasons.append(f"body does not contain a centred segment of length {segment_length} on H_{k - 1}")

    if spec.keep is None and spread_window is not None:
        spec = replace(spec, keep=0)
    trace = run_process(body, spec, probe=lambda st: {"ell": ad.section(st.body, st.line)})
    ell = np.array(trace.extras.get("ell", []), dtype=float)
    alphas = D.alphas[k - 1:spec.last_index]
    bound = segment_length * np.cumprod(np.cos(alphas))
    # the analytic chain restarts from each measured value: l_m >= l_{m-1} cos(alpha_m)
    chain_prev = np.concatenate([[segment_length], ell[:-1]])
    chain_ok = ell >= chain_prev * np.cos(alphas) * (1.0 - eps) - 1e-12
    if not chain_ok.all():
        reasons.append(f"section chain violated at {int((~chain_ok).sum())} steps")

    g = gamma_product(A, spec.last_index)
    gamma_lo = g.lower_bound
    tail = ell[len(ell) // 2:]
    if len(tail) == 0 or tail.min() < gamma_lo * (1.0 - eps):
        reasons.append("sections fell below gamma")

    values = trace.column(functional)
    value = float(np.nanmax(values))
    if functional == "area":
        threshold = math.pi * (gamma_lo / 2.0) ** 2
        lower_gate = 0.0
    else:
        threshold = gamma_lo
        lower_gate = 1.0 / (2.0 * math.pi)
    if not value < threshold:
        reasons.append(f"{functional} {value:.6g} is not below the threshold {threshold:.6g}")
    if not float(np.nanmin(values)) > lower_gate:
        reasons.append(f"{functional} must exceed {lower_gate:.6g}")

    coverage: dict = {}
    if A.kind == "oscillating":
        g_angles = D.betas[k:spec.last_index + 1] - D.betas[0]
        hi = A.params[1]
        coverage = {"low_visits": int(np.sum(np.isclose(g_angles, 0.0, atol=1e-12))),
                    "high_visits": int(np.sum(np.isclose(g_angles, hi, atol=1e-12)))}
        if min(coverage.values()) < 2:
            reasons.append("both oscillation endpoints must be visited at least twice")
    else:
        turn = float(np.sum(alphas))
        coverage = {"turn": turn}
        if turn < math.pi:
            reasons.append(f"lines turned by {turn:.4g} < pi: not every direction was swept")

    spreads = None
    if spread_window is not None:
        spreads = window_spread_lower(trace, spread_window)
    verdict = DIVERGENT if not reasons else INCONCLUSIVE
    return DivergenceCertificate(g.value, gamma_lo, ell, bound, functional, value, threshold, lower_gate,
                                 A.sum_diverges, coverage, verdict, reasons, trace, spreads)


# -- experiments over several runs ------------------------------------------

@dataclass
class StabilityReport:
    limits: list  # (k, limit body or None, verdict)
    distances: np.ndarray


def truncation_stability(body, spec: ProcessSpec, k_max: int, window: int | None = None,
                         tol: float | None = None) -> StabilityReport:
    """Run the process from every start index k = 1..k_max and compare the limits."""
    limits = []
    for k in range(1, k_max + 1):
        sp = replace(spec, start_index=k)
        T = run_process(body, sp)
        try:
            rep = detect_convergence(T, window, tol)
            verdict = rep.verdict
        except ShortTraceError:
            verdict = INCONCLUSIVE
        limits.append((k, T.final if verdict == CONVERGENT else None, verdict))
    ad = adapter(spec)
    n = len(limits)
    Dm = np.full((n, n), math.nan)
    for i in range(n):
        for j in range(n):
            a, b = limits[i][1], limits[j][1]
            if a is not None and b is not None:
                Dm[i, j] = 0.0 if i == j else ad.distance(a, b)
    return StabilityReport(limits, Dm)


@dataclass
class CrossCheckReport:
    verdicts: dict
    agree: bool
    sandwich_gap: float  # max over steps of sup (h_steiner - h_minkowski), should be <= 0
    fiber_steiner_gap: float
    traces: dict


def cross_symmetrization_check(body: pg.ConvexPolygon, sequence: DirectionSequence, steps: int | None = None,
                               rotation_correction: str = "none", window: int | None = None,
                               tol: float | None = None, tolerances: Tolerances = DEFAULT,
                               floor: float | None = None) -> CrossCheckReport:
    """Steiner, fiber and Minkowski processes on the same sequence, run in lockstep.

    Besides the three verdicts, the support functions of the Steiner and
    Minkowski iterates are compared at every step (the Steiner iterate must lie
    inside the Minkowski one) and the fiber iterate is compared with Steiner's.
    """
    if not isinstance(body, pg.ConvexPolygon):
        raise RepresentationError("cross checks run on polygons")
    specs = {op: ProcessSpec(op, "polygon", sequence, 1, rotation_correction, steps, tolerances)
             for op in ("steiner", "fiber", "minkowski")}
    gens = {op: process_steps(body, sp) for op, sp in specs.items()}
    sandwich, fib = -math.inf, 0.0
    records = {op: [] for op in specs}
    its = {op: deque(maxlen=2 * specs[op].window + 1) for op in specs}
    ad = _PolygonAdapter(specs["steiner"])
    for op in specs:
        a, w, lo, hi = ad.measures(body)
        records[op].append(StepRecord(0, float(sequence.betas[0]), math.nan, math.nan, a, w, lo, hi, 0.0))
        its[op].append((0, body))
    for states in zip(*gens.values()):
        cur = dict(zip(gens.keys(), states))
        S, F, M = cur["steiner"].body, cur["fiber"].body, cur["minkowski"].body
        sandwich = max(sandwich, pg.support_gap(S, M))
        fib = max(fib, pg.hausdorff_distance(S, F))
        for op, st in cur.items():
            a, w, lo, hi = ad.measures(st.body)
            prev = its[op][-1][1]
            records[op].append(StepRecord(st.step, st.beta, pg.hausdorff_distance(st.body, prev), math.nan,
                                          a, w, lo, hi, st.resample_err))
            its[op].append((st.step, st.body))
    traces = {op: ProcessTrace(specs[op], records[op], its[op], body) for op in specs}
    verdicts = {}
    for op, T in traces.items():
        try:
            verdicts[op] = detect_convergence(T, window, tol, floor).verdict
        except ShortTraceError:
            verdicts[op] = INCONCLUSIVE
    agree = len(set(verdicts.values())) == 1
    return CrossCheckReport(verdicts, agree, sandwich, fib, traces)


@dataclass
class BallReport:
    final_gap: float
    gaps: list  # (step, gap)
    decreasing: bool
    max_area_drift: float
    trace: ProcessTrace


def grid_ball_gap(G: gr.SupportGrid) -> float:
    """max - min of the support function after centring at the Steiner point."""
    D = G.dirs
    n = D.dimension
    s = n / D.sphere_measure * (D.weights[:, None] * G.values[:, None] * D.directions).sum(axis=0)
    h = G.values - D.directions @ s
    return float(h.max() - h.min())


def _ball_gap(body) -> float:
    if isinstance(body, pg.ConvexPolygon):
        return pg.ball_gap(body)
    if isinstance(body, gr.SupportGrid):
        return grid_ball_gap(body)
    raise RepresentationError("ball gaps are computed for polygons and grids")


def ball_limit_check(body, spec: ProcessSpec, every: int = 50) -> BallReport:
    """Track the distance from roundness along a run."""
    probe = lambda st: {"ball_gap": (st.step, _ball_gap(st.body))} if st.step % every == 0 else {}
    T = run_process(body, spec, probe)
    gaps = [(spec.start_index - 1, _ball_gap(body))] + list(T.extras.get("ball_gap", []))
    final = _ball_gap(T.final)
    if gaps[-1][0] != T.records[-1].step:
        gaps.append((T.records[-1].step, final))
    area = T.column("area")
    drift = float(np.nanmax(np.abs(area / area[0] - 1.0))) if not np.all(np.isnan(area)) else math.nan
    return BallReport(final, gaps, gaps[-1][1] < gaps[0][1], drift, T)
