"""symmkit command line: symmetrize | run | experiment | plot.

Exit codes: 0 success, 2 configuration / parse / unsupported operator,
3 capacity exceeded at run time, 4 inconclusive verdict when
``require_verdict`` was set.
"""

from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, fields
from pathlib import Path

from . import polygon as pg
from . import raster as rs
from .experiments import (EXPERIMENTS, ConfigError, ExperimentConfig, build_config, parse_config_text,
                          run_experiment, run_generic, write_artifacts)
from .fileio import FormatError, read_body, read_trace_csv, trace_chart_svg, write_body
from .geom import LineSubspace
from .grid import SupportGrid, minkowski_symmetrize_grid
from .processes import INCONCLUSIVE, RepresentationError, representation_of
from .sequences import SequenceError

EXIT_OK, EXIT_CONFIG, EXIT_CAPACITY, EXIT_INCONCLUSIVE = 0, 2, 3, 4

_HELP = {
    "name": "experiment name",
    "body": "builtin body name or path to a polygon / grid / raster file",
    "seed": "random seed (default 0)",
    "steps": "number of process steps (experiment-specific default)",
    "operator": "steiner | minkowski | fiber",
    "representation": "polygon | grid | raster | cloud (default polygon)",
    "sequence": "harmonic | power | geometric | periodic | explicit | oscillating | random | klain | lines",
    "c": "angle scale c",
    "p": "exponent of power sequences",
    "q": "ratio of geometric sequences",
    "endpoint": "oscillation endpoint in degrees (default 180/sqrt(8))",
    "angles": "comma-separated angles in degrees for periodic / explicit sequences",
    "correction": "none | schedule (rotation correction)",
    "window": "convergence window (default 50)",
    "tol": "convergence tolerance (default 1e-6 polygons, 5e-3 rasters)",
    "floor": "spread floor for a non-Cauchy verdict (default 10 * tol)",
    "simplify": "relative vertex simplification tolerance for polygon processes (default 1e-8)",
    "snap": "point cloud snapping pitch",
    "width": "thickness of the thin builtin bodies (default 0.05)",
    "radius": "disk radius of the bar-disk raster (default 0.05)",
    "out": "output directory (default out)",
    "require_verdict": "exit with status 4 when the verdict is inconclusive",
}


def _add_config_options(p: argparse.ArgumentParser, skip=()):
    p.add_argument("--config", action="append", default=[], metavar="FILE",
                   help="key=value config file (repeatable; with --jobs each runs separately)")
    for f in fields(ExperimentConfig):
        if f.name in skip:
            continue
        flag = "--" + f.name.replace("_", "-")
        if f.type == "bool":
            p.add_argument(flag, dest=f.name, action="store_const", const=True, default=None, help=_HELP[f.name])
        else:
            p.add_argument(flag, dest=f.name, default=None, help=_HELP[f.name])
    p.add_argument("--jobs", type=int, default=1, help="run several configs concurrently")
    p.add_argument("overrides", nargs="*", metavar="[NAME] KEY=VALUE",
                   help="experiment name (experiment only) and extra config values")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="symmkit", description="Symmetrization processes on planar convex bodies.")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("symmetrize", help="apply one symmetrization to a body file")
    s.add_argument("input")
    s.add_argument("--operator", default="steiner", choices=("steiner", "minkowski", "fiber"))
    s.add_argument("--angle", type=float, default=0.0, help="angle of the line H in degrees (default 0)")
    s.add_argument("--out", default=None, help="output file (default: <input stem>_<operator><suffix>)")

    r = sub.add_parser("run", help="run a process described by config values")
    _add_config_options(r, skip=("name",))

    e = sub.add_parser("experiment", help="run a named experiment",
                       description="Experiments: " + ", ".join(EXPERIMENTS))
    _add_config_options(e, skip=("name",))

    pl = sub.add_parser("plot", help="chart a trace CSV as SVG")
    pl.add_argument("trace")
    pl.add_argument("--out", default=None, help="output SVG (default: trace path with .svg)")
    pl.add_argument("--columns", default="dh_prev,area,mean_width")
    return ap


# -- symmetrize ----------------------------------------------------------------

def _measures_line(tag: str, body) -> str:
    if isinstance(body, pg.ConvexPolygon):
        return f"{tag}: area={body.area:.12g} mean_width={pg.mean_width(body):.12g} vertices={len(body)}"
    if isinstance(body, rs.RasterSet):
        return f"{tag}: area={rs.raster_area(body):.12g} cells={body.count}"
    return f"{tag}: directions={len(body.values)}"


def _is_symmetric(P: pg.ConvexPolygon, H: LineSubspace) -> bool:
    R = pg.reflect_polygon(P, H)
    return pg.hausdorff_distance(P, R) <= 1e-12 * max(P.diameter, 1.0)


def cmd_symmetrize(args) -> int:
    body = read_body(args.input)
    H = LineSubspace.from_angle(math.radians(args.angle))
    rep = representation_of(body)
    op = args.operator
    if isinstance(body, pg.ConvexPolygon):
        if _is_symmetric(body, H):
            out = body   # every operator fixes H-symmetric bodies
        else:
            out = {"steiner": pg.steiner_symmetrize, "minkowski": pg.minkowski_symmetrize,
                   "fiber": pg.fiber_symmetrize}[op](body, H)
    elif isinstance(body, SupportGrid):
        if op != "minkowski":
            raise RepresentationError(f"{op} symmetrization is not available on support grids")
        out = minkowski_symmetrize_grid(body, H)
    else:
        if op != "steiner":
            raise RepresentationError(f"{op} symmetrization is not available on rasters")
        out = rs.steiner_symmetrize_raster(body, H)
    src = Path(args.input)
    target = Path(args.out) if args.out else src.with_name(f"{src.stem}_{op}{src.suffix or '.txt'}")
    write_body(target, out)
    print(_measures_line("before", body))
    print(_measures_line("after", out))
    print(f"wrote {target} ({rep})")
    return EXIT_OK


# -- run / experiment ---------------------------------------------------------------

def _load_configs(args, name: str | None) -> list[tuple[ExperimentConfig, str | None]]:
    problems: list[str] = []
    overrides = {f.name: getattr(args, f.name, None) for f in fields(ExperimentConfig) if f.name != "name"}
    for item in args.overrides:
        if "=" not in item and name is not None and "name" not in overrides:
            overrides["name"] = item
            continue
        if "=" not in item:
            problems.append(f"override {item!r} is not key=value")
            continue
        k, v = item.split("=", 1)
        k = k.strip().replace("-", "_")
        if k not in overrides and k != "name":
            problems.append(f"unknown key {k!r}")
            continue
        overrides[k] = v
    bases: list[tuple[dict, str | None]] = []
    for path in args.config or [None]:
        if path is None:
            bases.append(({}, None))
            continue
        try:
            text = Path(path).read_text()
        except OSError as exc:
            problems.append(f"cannot read config {path}: {exc.strerror}")
            continue
        file_problems: list[str] = []
        base = parse_config_text(text, file_problems)
        problems += [f"{path}: {m}" for m in file_problems]
        bases.append((base, Path(path).stem))
    out = []
    for base, stem in bases:
        if name is not None and "name" not in overrides and "name" not in base:
            problems.append("experiment name missing (known: " + ", ".join(EXPERIMENTS) + ")")
            continue
        try:
            cfg = build_config(base, overrides)
        except ConfigError as exc:
            problems += [f"{stem}: {m}" if stem else m for m in exc.problems]
            continue
        out.append((cfg, stem))
    if problems:
        raise ConfigError(problems)
    return out


def _execute(cfg: ExperimentConfig) -> tuple[int, list[str]]:
    """Run one config; returns (exit code, lines to print)."""
    try:
        res = run_experiment(cfg) if cfg.name else run_generic(cfg)
    except (ConfigError, SequenceError, RepresentationError, FormatError) as exc:
        return EXIT_CONFIG, [f"error: {exc}"]
    except rs.CapacityError as exc:
        return EXIT_CAPACITY, [f"capacity exceeded: {exc}"]
    files = write_artifacts(res, cfg.out)
    lines = list(res.notes) + [f"wrote {p}" for p in files] + [res.verdict_line()]
    code = EXIT_INCONCLUSIVE if cfg.require_verdict and res.verdict == INCONCLUSIVE else EXIT_OK
    return code, lines


def _run_many(args, name: str | None) -> int:
    configs = _load_configs(args, name)
    if len(configs) > 1:
        # per-config output directories
        configs = [(ExperimentConfig(**{**asdict(c), "out": str(Path(c.out) / (stem or f"config{i}"))}), stem)
                   for i, (c, stem) in enumerate(configs)]
    cfgs = [c for c, _ in configs]
    if args.jobs > 1 and len(cfgs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_execute, cfgs))
    else:
        results = [_execute(c) for c in cfgs]
    code = EXIT_OK
    for (c, stem), (rc, lines) in zip(configs, results):
        stream = sys.stderr if rc in (EXIT_CONFIG, EXIT_CAPACITY) else sys.stdout
        for line in lines:
            print(f"[{stem}] {line}" if len(configs) > 1 else line, file=stream)
        code = max(code, rc)
    return code


def cmd_plot(args) -> int:
    cols = read_trace_csv(args.trace)
    names = tuple(s.strip() for s in args.columns.split(",") if s.strip())
    missing = [n for n in names if n not in cols]
    if missing:
        raise FormatError(f"trace has no column(s): {', '.join(missing)}")
    target = Path(args.out) if args.out else Path(args.trace).with_suffix(".svg")
    target.write_text(trace_chart_svg(cols, names))
    print(f"wrote {target}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args, extra = parser.parse_known_args(argv)
    # key=value items may follow options; argparse leaves those behind
    if extra:
        if args.command in ("symmetrize", "plot") or any(x.startswith("-") for x in extra):
            parser.error("unrecognized arguments: " + " ".join(extra))
        args.overrides = list(args.overrides) + extra
    try:
        if args.command == "symmetrize":
            return cmd_symmetrize(args)
        if args.command == "plot":
            return cmd_plot(args)
        return _run_many(args, "" if args.command == "experiment" else None)
    except (ConfigError, FormatError, RepresentationError, SequenceError, OSError) as exc:
        problems = getattr(exc, "problems", None) or [str(exc)]
        for m in problems:
            print(f"error: {m}", file=sys.stderr)
        return EXIT_CONFIG
    except rs.CapacityError as exc:
        print(f"capacity exceeded: {exc}", file=sys.stderr)
        return EXIT_CAPACITY


if __name__ == "__main__":
    sys.exit(main())
