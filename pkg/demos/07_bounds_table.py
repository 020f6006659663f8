"""
The bounds table
================

Quantum and classical upper and lower bounds per dimension, written as CSV.
The default relabelling scans are large; here d = 3 uses a short random scan
anchored at the identity labelling.
"""

# %%
from mubgame.cli import cmd_bounds, rows_to_csv

rows = cmd_bounds([2, 3], restarts=10, scan_restarts=5, qlb_mode={3: "random:4"}, workers=1)
print(rows_to_csv(rows))

# %%
# The same from the shell:
#   mubgame bounds --dims 2 3 --format csv --out bounds.csv
