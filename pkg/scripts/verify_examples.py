#!/usr/bin/env python3
"""Standalone script to run every golden case and print a summary."""

import sys, os, logging
sys.path.insert(0, os.path.dirname(os.path.dirname(__file__)))

logging.basicConfig(level=logging.INFO, format="%(asctime)s %(levelname)s %(message)s")

from src.config import golden_tolerance
from src.spectral.golden import run_cases

results = run_cases()
for r in results:
    status = "OK" if r.passed else "FAIL"
    print(f"  [{status}] Case {r.name} ({r.title}) max residual {r.max_residual:.2e}")
    if r.error:
        print(f"    Error: {r.error}")
    for c in r.checks:
        if not c.passed(r.tolerance):
            print(f"    {c.label}: got {c.value!r}, expected {c.expected!r}")

failed = sum(not r.passed for r in results)
print(f"\nRan {len(results)} cases at tolerance {golden_tolerance():.0e}, {failed} failed.")
sys.exit(1 if failed else 0)
