"""
Scanning random metrics for constant HSC
========================================

Draw random Hermitian chart metrics and random complex Lie algebras and rank
them by how far each connection's holomorphic sectional curvature is from
constant.  Chern-flat Lie groups sit at zero for the Chern connection; a
non-Kaehler chart draw below tolerance would be flagged in the CSV.
"""

import contextlib
import csv
import io

from hermlab.cli import main

buf = io.StringIO()
with contextlib.redirect_stdout(buf):
    main(["scan", "--family", "chart-random", "--dim", "2", "--trials", "40", "--seed", "0"])
rows = list(csv.DictReader(io.StringIO(buf.getvalue())))
print("lowest residuals (chart-random, n=2):")
for r in rows[:8]:
    print(f"  seed={r['model_seed']:>10} {r['connection']:>18} c={float(r['c']):+.4f} "
          f"res={float(r['residual']):.2e} kaehler={r['kaehler']} {r['flag']}")
non_kaehler = [r for r in rows if r["kaehler"] == "false"]
print("best non-Kaehler residual:", min(float(r["residual"]) for r in non_kaehler))

buf = io.StringIO()
with contextlib.redirect_stdout(buf):
    main(["scan", "--family", "lie-random", "--dim", "3", "--trials", "20", "--seed", "0"])
rows = list(csv.DictReader(io.StringIO(buf.getvalue())))
print("lie-random, n=3, chern rows:")
for r in rows:
    if r["connection"] == "chern":
        print(f"  {r['family']:>14} res={float(r['residual']):.1e} {r['flag']}")
