#!/usr/bin/env python3
"""Run named experiments (default: all) and write their artifacts under OUT/<name>."""

import argparse
import sys
import time
from pathlib import Path

from symmkit.experiments import EXPERIMENTS, build_config, run_experiment, write_artifacts


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("names", nargs="*", help=f"subset of: {', '.join(EXPERIMENTS)}")
    ap.add_argument("--out", default="out")
    ap.add_argument("--seed", type=int, default=None)
    args = ap.parse_args(argv)
    names = args.names or list(EXPERIMENTS)
    unknown = [n for n in names if n not in EXPERIMENTS]
    if unknown:
        ap.error("unknown experiment(s): " + ", ".join(unknown))
    for name in names:
        cfg = build_config({}, {"name": name, "seed": args.seed, "out": str(Path(args.out) / name)})
        t = time.perf_counter()
        res = run_experiment(cfg)
        write_artifacts(res, cfg.out)
        print(f"{name:32s} {time.perf_counter() - t:7.1f}s  {res.verdict_line()}", flush=True)
    return 0


if __name__ == "__main__":
    sys.exit(main())
