#!/usr/bin/env python3
"""Run the acceptance criteria outside pytest; one PASS/FAIL line each, exit 1 on any failure."""

import runpy
import sys
from pathlib import Path

tests = Path(__file__).resolve().parent.parent / "tests"
sys.path.insert(0, str(tests))
runpy.run_path(str(tests / "test_acceptance.py"), run_name="__main__")
