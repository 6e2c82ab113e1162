"""Where the two failing bound checks fail, and why the conclusion still holds.

The upper bound for S2(alpha; y) keeps only the n = 0 shell.  At y = sqrt3/2
the n = +-1 shell has the same exponent, so S2 is 3/2 times the kept term.
The Laplacian estimate built on it fails too, while the Laplacian itself
stays positive.

Run: python3 demos/bound_gaps.py
"""

import math

from thetalattice import bounds
from thetalattice import proof_sums as ps
from thetalattice.points import HEX_Y

print(f"{'alpha':>6} {'y':>6} {'S2 / kept term':>15} {'1 + eps_b':>10} {'Laplacian':>12} {'estimate':>12}")
for a in (2.0, 5.0, 10.0):
    for y in (HEX_Y, 1.2, 2.0):
        kept = 2 / y**4 * math.exp(-math.pi * a / y)
        ratio = ps.s_sum("S2", a, y) / kept
        lap = ps.laplacian_from_sums(a, y)
        est = float(ps.laplacian_lower_bound(a, y))
        print(f"{a:6.2f} {y:6.3f} {ratio:15.6f} {1 + float(ps.eps_b(a, y)):10.6f} {lap:12.5e} {est:12.5e}")

for name in ("s_sum_upper_bounds", "laplacian_lower_bound", "laplacian_positive"):
    r = bounds.check_lemma(name)
    print(f"{name}: passed={r.passed} margin={r.margin:.3e} violations={r.n_violations}/{r.n_points}")
