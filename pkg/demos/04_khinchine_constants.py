"""
Khinchine constants for 0 < p <= 2
==================================

The best lower constant A_p switches formula at p0, the root of
Gamma((p+1)/2) = sqrt(pi)/2 between 1 and 2.
"""

import numpy as np

from littlewood_lab import haagerup_A, rademacher_moment, solve_p0, verify_khinchine
from littlewood_lab.khinchine import gamma

p0 = solve_p0(1e-12)
print(f"p0 = {p0:.13f}, residual {gamma((p0 + 1) / 2) - np.sqrt(np.pi) / 2:.1e}")

for p in (0.5, 1.0, 1.5, p0, 1.9, 2.0):
    c = haagerup_A(p)
    print(f"p={p:.4f}  A_p={c.A:.12f}  ({c.branch})")

# a = (1, 1) makes the p = 1 bound an equality
print("moment_1(1, 1) =", rademacher_moment([1, 1], 1), " A_1 * sqrt 2 =", haagerup_A(1).A * np.sqrt(2))

# random vectors sit strictly inside the sandwich
rng = np.random.default_rng(0)
for p in (0.5, 1.0, p0):
    reps = [verify_khinchine(rng.standard_normal(10), p) for _ in range(50)]
    print(
        f"p={p:.3f}: all hold={all(r.holds for r in reps)}, "
        f"min lower margin={min(r.lower_margin for r in reps):.4f}"
    )

# moments grow with p
a = rng.standard_normal(8)
print([round(rademacher_moment(a, p), 6) for p in np.linspace(0.5, 2, 7)])
