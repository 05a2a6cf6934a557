"""Re-derive every catalogued invariant table and check it numerically.

Runs both classification pipelines over the whole algebra catalog
(dimensions 1-3, free and simply-transitive actions, including the
one-parameter families) and prints one PASS/FAIL line per table row.

Run:  python3 demos/reproduce_tables.py
"""

from lieinv import numeric as nm
from lieinv.verify import run_fixture_suite

report = run_fixture_suite(["all"], nm.SamplerConfig())
print(report.to_text())
print(f"\n{len(report.rows)} rows, overall: "
      f"{'PASS' if report.passed else 'FAIL'}")
