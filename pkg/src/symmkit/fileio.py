"""Plain-text file formats and a small deterministic SVG writer."""

from __future__ import annotations

import csv
import math
from pathlib import Path

import numpy as np

from .grid import DirectionSet, SupportGrid
from .polygon import ConvexPolygon
from .raster import RasterSet
from .processes import TRACE_COLUMNS


class FormatError(ValueError):
    pass


def _g17(x: float) -> str:
    return format(float(x), ".17g")


# -- polygons ----------------------------------------------------------------

def format_polygon(P: ConvexPolygon) -> str:
    lines = [f"# convex polygon, kind={P.kind}, {len(P)} vertices, counterclockwise"]
    lines += [f"{_g17(x)} {_g17(y)}" for x, y in P.vertices]
    return "\n".join(lines) + "\n"


def write_polygon(path, P: ConvexPolygon) -> None:
    Path(path).write_text(format_polygon(P))


def parse_polygon(text: str) -> ConvexPolygon:
    pts = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(f"line {no}: expected 'x y', got {raw.strip()!r}")
        try:
            pts.append((float(parts[0]), float(parts[1])))
        except ValueError:
            raise FormatError(f"line {no}: not a number in {raw.strip()!r}") from None
    if not pts:
        raise FormatError("no vertices found")
    return ConvexPolygon(pts)


def read_polygon(path) -> ConvexPolygon:
    return parse_polygon(Path(path).read_text())


# -- support grids -------------------------------------------------------------

def format_grid(G: SupportGrid) -> str:
    D = G.dirs
    out = [f"{D.dimension} {len(D)}"]
    if D.dimension == 2:
        out += [f"{_g17(t)} {_g17(h)}" for t, h in zip(D.angles, G.values)]
    else:
        out += [" ".join(_g17(x) for x in (*u, h)) for u, h in zip(D.directions, G.values)]
    return "\n".join(out) + "\n"


def write_grid(path, G: SupportGrid) -> None:
    Path(path).write_text(format_grid(G))


def parse_grid(text: str) -> SupportGrid:
    rows = [r.split() for r in text.splitlines() if r.strip() and not r.lstrip().startswith("#")]
    if not rows or len(rows[0]) != 2:
        raise FormatError("grid header must be 'n N'")
    n, N = int(rows[0][0]), int(rows[0][1])
    body = np.array(rows[1:], dtype=float)
    if body.shape != (N, 2 if n == 2 else 4):
        raise FormatError(f"expected {N} rows of {'theta h' if n == 2 else 'x y z h'}")
    if n == 2:
        D = DirectionSet.circle(N)
        if np.abs(body[:, 0] - D.angles).max() > 1e-12:
            raise FormatError("angles are not equally spaced from 0")
    elif n == 3:
        dirs = body[:, :3]
        if np.abs(np.linalg.norm(dirs, axis=1) - 1.0).max() > 1e-12:
            raise FormatError("directions must be unit vectors")
        # weights are recomputed from the directions
        from scipy.spatial import SphericalVoronoi
        D = DirectionSet(3, dirs, SphericalVoronoi(dirs, radius=1.0).calculate_areas())
    else:
        raise FormatError(f"unsupported dimension {n}")
    return SupportGrid(D, body[:, -1])


def read_grid(path) -> SupportGrid:
    return parse_grid(Path(path).read_text())


# -- rasters -------------------------------------------------------------------

def format_pbm(S: RasterSet) -> tuple[str, str]:
    """Plain PBM of the full domain and the sidecar line.

    Image column x is cell i = x - half_extent; image row y (top first) is
    cell j = half_extent - 1 - y, all in the raster's own frame. The sidecar
    holds ``cell_size half_extent`` and, for a rotated frame, its angle.
    """
    E = S.half_extent
    img = np.zeros((2 * E, 2 * E), dtype=np.uint8)
    c = S.cells()
    img[E - 1 - c[:, 1], c[:, 0] + E] = 1
    bits = (img.ravel() + ord("0")).tobytes().decode()
    body = "\n".join(bits[i:i + 64] for i in range(0, len(bits), 64))
    pbm = f"P1\n# symmkit raster\n{2 * E} {2 * E}\n{body}\n"
    side = f"{_g17(S.cell_size)} {E}"
    if S.angle != 0.0:
        side += f" {_g17(S.angle)}"
    return pbm, side + "\n"


def write_raster(path, S: RasterSet) -> None:
    pbm, side = format_pbm(S)
    p = Path(path)
    p.write_text(pbm)
    Path(str(p) + ".side").write_text(side)


def parse_pbm(pbm: str, side: str) -> RasterSet:
    toks = []
    for line in pbm.splitlines():
        line = line.split("#", 1)[0]
        toks.append(line)
    text = " ".join(toks).split()
    if not text or text[0] != "P1":
        raise FormatError("not a plain PBM (P1) file")
    try:
        W, Hh = int(text[1]), int(text[2])
    except (IndexError, ValueError):
        raise FormatError("bad PBM size line") from None
    bits = "".join(text[3:])
    if len(bits) != W * Hh or set(bits) - {"0", "1"}:
        raise FormatError(f"expected {W * Hh} bits")
    sp = side.split()
    if len(sp) not in (2, 3):
        raise FormatError("sidecar must be 'cell_size half_extent [angle]'")
    h, E = float(sp[0]), int(sp[1])
    angle = float(sp[2]) if len(sp) == 3 else 0.0
    if W != 2 * E or Hh != 2 * E:
        raise FormatError("image size does not match half_extent")
    img = np.frombuffer(bits.encode(), dtype=np.uint8).reshape(Hh, W) - ord("0")
    y, x = np.nonzero(img)
    cells = np.column_stack([x - E, E - 1 - y])
    return RasterSet.from_cells(cells, h, E, angle)


def read_raster(path) -> RasterSet:
    p = Path(path)
    side = Path(str(p) + ".side")
    if not side.exists():
        raise FormatError(f"missing sidecar {side}")
    return parse_pbm(p.read_text(), side.read_text())


def read_body(path):
    """Polygon literal, grid snapshot or PBM raster, by content."""
    text = Path(path).read_text()
    head = text.lstrip()[:2]
    if head == "P1":
        return read_raster(path)
    first = next((l for l in text.splitlines() if l.strip() and not l.lstrip().startswith("#")), "")
    parts = first.split()
    if len(parts) == 2 and all(p.isdigit() for p in parts) and int(parts[0]) in (2, 3) and int(parts[1]) > 3:
        return parse_grid(text)
    return parse_polygon(text)


def write_body(path, body) -> None:
    if isinstance(body, ConvexPolygon):
        write_polygon(path, body)
    elif isinstance(body, SupportGrid):
        write_grid(path, body)
    elif isinstance(body, RasterSet):
        write_raster(path, body)
    else:
        raise TypeError(f"cannot write {type(body).__name__}")


# -- traces ----------------------------------------------------------------------

def read_trace_csv(path) -> dict[str, np.ndarray]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise FormatError("empty trace file")
    head = rows[0]
    missing = [c for c in TRACE_COLUMNS if c not in head]
    if missing:
        raise FormatError(f"trace is missing column(s): {', '.join(missing)}")
    idx = {c: head.index(c) for c in TRACE_COLUMNS}
    out = {}
    for c in TRACE_COLUMNS:
        try:
            out[c] = np.array([float(r[idx[c]]) for r in rows[1:]])
        except (ValueError, IndexError):
            raise FormatError(f"malformed value in column {c}") from None
    return out


# -- SVG -----------------------------------------------------------------------------

def _n(x: float) -> str:
    s = format(float(x), ".6f").rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


class SVG:
    """Minimal SVG document builder with fixed number formatting."""

    def __init__(self, width: float, height: float, view=None):
        self.width, self.height = width, height
        self.view = view or (0.0, 0.0, width, height)
        self.items: list[str] = []

    def add(self, item: str) -> None:
        self.items.append(item)

    def polygon(self, pts, fill="none", stroke="black", width=1.0, opacity=1.0):
        p = " ".join(f"{_n(x)},{_n(y)}" for x, y in pts)
        self.add(f'<polygon points="{p}" fill="{fill}" fill-opacity="{_n(opacity)}" '
                 f'stroke="{stroke}" stroke-width="{_n(width)}"/>')

    def polyline(self, pts, stroke="black", width=1.0):
        p = " ".join(f"{_n(x)},{_n(y)}" for x, y in pts)
        self.add(f'<polyline points="{p}" fill="none" stroke="{stroke}" stroke-width="{_n(width)}"/>')

    def line(self, a, b, stroke="black", width=1.0):
        self.add(f'<line x1="{_n(a[0])}" y1="{_n(a[1])}" x2="{_n(b[0])}" y2="{_n(b[1])}" '
                 f'stroke="{stroke}" stroke-width="{_n(width)}"/>')

    def rect(self, x, y, w, h, fill="black"):
        self.add(f'<rect x="{_n(x)}" y="{_n(y)}" width="{_n(w)}" height="{_n(h)}" fill="{fill}"/>')

    def text(self, x, y, s, size=12.0, anchor="start"):
        s = s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
        self.add(f'<text x="{_n(x)}" y="{_n(y)}" font-size="{_n(size)}" '
                 f'font-family="monospace" text-anchor="{anchor}">{s}</text>')

    def render(self) -> str:
        vx, vy, vw, vh = self.view
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{_n(self.width)}" '
                f'height="{_n(self.height)}" viewBox="{_n(vx)} {_n(vy)} {_n(vw)} {_n(vh)}">')
        return "\n".join([head, *self.items, "</svg>"]) + "\n"

    def save(self, path) -> None:
        Path(path).write_text(self.render())


def _body_outline(body):
    if isinstance(body, ConvexPolygon):
        return body.vertices
    if isinstance(body, SupportGrid) and body.dirs.dimension == 2:
        # vertices of the polygon cut out by the sampled supporting lines
        t = body.dirs.angles
        h = body.values
        t2 = np.roll(t, -1)
        h2 = np.roll(h, -1)
        det = np.sin(t2 - t)
        x = (h * np.sin(t2) - h2 * np.sin(t)) / det
        y = (h2 * np.cos(t) - h * np.cos(t2)) / det
        return np.column_stack([x, y])
    return None


def body_svg(bodies, size: int = 400, colors=("black", "red", "blue", "green")) -> str:
    """Draw convex bodies (polygons, planar grids) and rasters in one picture."""
    outlines, rasters = [], []
    for b in bodies:
        if isinstance(b, RasterSet):
            rasters.append(b)
            outlines.append(None)
        else:
            o = _body_outline(b)
            if o is None:
                raise TypeError(f"cannot draw {type(b).__name__}")
            outlines.append(o)
    pts = [o for o in outlines if o is not None] + [r.corners() for r in rasters]
    allp = np.concatenate(pts)
    lo, hi = allp.min(axis=0), allp.max(axis=0)
    span = float(max(hi - lo)) or 1.0
    pad = 0.05 * span
    lo, hi = lo - pad, lo + span + pad
    ext = span + 2 * pad
    svg = SVG(size, size, (float(lo[0]), float(-hi[1]), ext, ext))
    stroke = ext / size
    for k, b in enumerate(bodies):
        col = colors[k % len(colors)]
        if isinstance(b, RasterSet):
            _raster_cells(svg, b, col)
        else:
            o = outlines[k]
            if len(o) == 1:
                svg.add(f'<circle cx="{_n(o[0, 0])}" cy="{_n(-o[0, 1])}" r="{_n(2 * stroke)}" fill="{col}"/>')
            else:
                svg.polygon([(x, -y) for x, y in o], stroke=col, width=stroke)
    return svg.render()


def _raster_cells(svg: SVG, S: RasterSet, color: str):
    h = S.cell_size
    deg = -math.degrees(S.angle)
    items = []
    i0, j0 = S.origin
    for a, col in enumerate(S.mask):
        idx = np.flatnonzero(col)
        if len(idx) == 0:
            continue
        # runs of consecutive occupied cells become one rectangle
        brk = np.flatnonzero(np.diff(idx) > 1)
        starts = np.concatenate([[idx[0]], idx[brk + 1]])
        ends = np.concatenate([idx[brk], [idx[-1]]])
        for s, e in zip(starts, ends):
            x = (i0 + a) * h
            y = -(j0 + e + 1) * h
            items.append(f'<rect x="{_n(x)}" y="{_n(y)}" width="{_n(h)}" height="{_n((e - s + 1) * h)}"/>')
    svg.add(f'<g fill="{color}" transform="rotate({_n(deg)})">')
    for it in items:
        svg.add(it)
    svg.add("</g>")


def trace_chart_svg(columns: dict[str, np.ndarray], names=("dh_prev", "area", "mean_width"),
                    width: int = 640, panel: int = 180) -> str:
    """Line charts of trace columns against the step index, one panel each."""
    missing = [n for n in (*names, "step") if n not in columns]
    if missing:
        raise FormatError(f"trace is missing column(s): {', '.join(missing)}")
    step = columns["step"]
    H = panel * len(names)
    svg = SVG(width, H)
    left, right, top_pad, bot_pad = 70.0, 10.0, 20.0, 20.0
    for k, name in enumerate(names):
        y0 = k * panel
        y = np.asarray(columns[name], dtype=float)
        ok = np.isfinite(y)
        x_lo, x_hi = (float(step.min()), float(step.max())) if len(step) else (0.0, 1.0)
        if x_hi == x_lo:
            x_hi = x_lo + 1.0
        if ok.any():
            lo, hi = float(y[ok].min()), float(y[ok].max())
        else:
            lo, hi = 0.0, 1.0
        flat = hi == lo
        if flat:
            lo, hi = lo - 1.0, hi + 1.0
        px = lambda s: left + (s - x_lo) / (x_hi - x_lo) * (width - left - right)
        py = lambda v: y0 + top_pad + (hi - v) / (hi - lo) * (panel - top_pad - bot_pad)
        svg.rect(left, y0 + top_pad, width - left - right, panel - top_pad - bot_pad, fill="#f4f4f4")
        svg.text(left, y0 + 14, name, 12)
        svg.text(left - 4, y0 + top_pad + 4, format(hi if not flat else hi - 1.0, ".4g"), 10, "end")
        svg.text(left - 4, y0 + panel - bot_pad, format(lo if not flat else lo + 1.0, ".4g"), 10, "end")
        # break the line at missing values
        run: list[tuple[float, float]] = []
        for s, v, good in zip(step, y, ok):
            if good:
                run.append((px(s), py(v)))
            elif run:
                svg.polyline(run, stroke="#1f4e9c")
                run = []
        if run:
            svg.polyline(run, stroke="#1f4e9c")
    return svg.render()
