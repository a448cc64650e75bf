"""
Running the verification suites
===============================

Each suite draws its own samples from a fixed seed and reports the worst
value seen against its threshold.  The same suites back the command
``stokes-cluster verify``.
"""

from stokes_cluster.verify import SUITES, run_suite

for name in SUITES:
    res = run_suite(name)
    print(res.line())
    if not res.passed:
        print("   ", res.detail)
