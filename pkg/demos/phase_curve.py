"""Minimizing height y_b on the ray x = 1/2 as b crosses the thresholds, alpha = 2.

Run: python3 demos/phase_curve.py
"""

import numpy as np

from thetalattice import classify_phase, find_bc1
from thetalattice.points import SQRT8, EnergyParams

alpha = 2.0
th = find_bc1(alpha)
print(f"alpha = {alpha}: b_c1 = {th.b_c1:.6f} (bracket {th.lo:.6f} .. {th.hi:.6f}), b_c2 = 2 sqrt2 = {SQRT8:.6f}")
print(f"{'b':>8} {'phase':>15} {'y_b':>12} {'energy':>14}")
for b in np.concatenate([[0.0, 1.0, 2.0], np.linspace(th.lo - 0.01, SQRT8 - 1e-3, 9), [SQRT8, 3.0]]):
    r = classify_phase(EnergyParams(alpha, b))
    yb = "" if r.y_b is None else f"{r.y_b:.5f}"
    en = "" if r.energy_at_min is None else f"{r.energy_at_min:.6e}"
    flag = " (search ceiling)" if r.at_ceiling and r.y_b is not None else ""
    print(f"{b:8.5f} {r.phase.value:>15} {yb:>12} {en:>14}{flag}")
