"""Desk-scale Monte-Carlo study of the anchor test.

Runs a reduced grid over (N, rate gap, anchor count, relaxation),
testing each corrupted fit against its clean twin, and prints the
rejection-rate table plus where the outputs live.  Pass --full for the
full default grid at 50 runs per cell (a few minutes).

Run:
    python demos/06_experiment_grid.py [--full] [--plots]
"""

import sys
import time
from pathlib import Path

from labelnoise import ExperimentConfig, run_grid

OUT = Path(__file__).parent / "output"

full = "--full" in sys.argv
plots = "--plots" in sys.argv or not full

if full:
    config = ExperimentConfig(runs=50, root_seed=1)
    outdir = OUT / "grid_full"
else:
    config = ExperimentConfig(
        n_grid=(500, 2000),
        noise_gaps=((0.0, 0.0), (0.0, 0.05), (0.0, 0.20)),
        k_grid=(1, 8, 32),
        delta_grid=(0.0, 0.10),
        runs=60,
        root_seed=1,
    )
    outdir = OUT / "grid_small"

print("=" * 72)
print(f"  Grid: {len(config.cells())} cells x {config.runs} runs "
      f"(root seed {config.root_seed})")
print("=" * 72)
t0 = time.time()
summary = run_grid(config, outdir, plots=plots, progress=False)
print(f"\n  done in {time.time() - t0:.1f}s; outputs in {outdir}/")
print(f"  canonical CSVs: {summary.runs_csv.name}, {summary.cells_csv.name}")
if plots:
    print("  figures: boxes_*.svg (p-value panels), power_curves.svg")

print()
print("=" * 72)
print("  Rejection rate of the corrupted fit at level "
      f"{config.significance} (clean fit in parentheses)")
print("=" * 72)
for delta in config.delta_grid:
    print(f"\n  delta = {delta:g}")
    header = f"  {'N':>6} " + "".join(
        f"{f'gap={a - b:+.2f}, k={k}':>18}"
        for a, b in config.noise_gaps for k in config.k_grid
    )
    print(header)
    for n in config.n_grid:
        row = f"  {n:6d} "
        for a, b in config.noise_gaps:
            for k in config.k_grid:
                s = summary.cell_by_coords(n, a, b, k, delta)
                row += f"{s.noisy_reject_rate:8.2f} ({s.clean_reject_rate:4.2f})   "
        print(row)

print("""
  Reading the table:
  * gap +0.00 rows are null cells: both rates should sit near the level
    at delta = 0, and the clean rate inflates at delta = 0.10 for small
    k (undeclared relaxation).
  * power grows with N, with the gap, and with k, in line with the
    analytic curves of demo 03.
  * re-running with the same root seed reproduces the CSVs byte for
    byte; delete the output directory to start fresh, or keep it to
    resume an interrupted grid.
""")
