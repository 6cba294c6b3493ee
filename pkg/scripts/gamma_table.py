#!/usr/bin/env python3
"""Truncated rotation products and their certified lower bounds for a few angle sequences."""

import math

from symmkit.sequences import AngleSequence, gamma_product

ROWS = [
    ("harmonic c=1", AngleSequence.harmonic(1.0)),
    ("harmonic c=0.6", AngleSequence.harmonic(0.6)),
    ("power c=1 p=0.75", AngleSequence.power(1.0, 0.75)),
    ("oscillating pi/sqrt(8)", AngleSequence.oscillating(math.pi / math.sqrt(8))),
]

if __name__ == "__main__":
    print(f"{'sequence':26s} {'M':>8s} {'product':>20s} {'lower bound':>20s}")
    for label, A in ROWS:
        for M in (200, 10 ** 4, 10 ** 6):
            g = gamma_product(A, M)
            print(f"{label:26s} {M:8d} {g.value:20.15f} {g.lower_bound:20.15f}")
