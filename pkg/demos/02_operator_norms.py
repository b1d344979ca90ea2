"""
Operator norms on c0
====================

The norm of a multilinear form on c0 is a maximum over sign vectors. One
axis can always be solved in closed form (pick each sign to match its
inner sum), so only the other axes need to be searched.
"""

import time

from littlewood_lab import alternating_ascent, certified_norm, construct_extremal, exact_sup_norm
from littlewood_lab.extremal import analytic_norm_upper

# exhaustive search: 2^14 sign patterns for T_4
for m in (2, 3, 4):
    t0 = time.perf_counter()
    res = exact_sup_norm(construct_extremal(m))
    dt = time.perf_counter() - t0
    print(f"||T_{m}|| = {res.value}  ({res.stats['sign_patterns']} patterns, {dt * 1e3:.1f} ms)")

# the witness is a sign vector per axis
res = exact_sup_norm(construct_extremal(3))
print("witness:", res.certificate.tolist())

# beyond m = 4 the search space explodes (2^30 for T_5), so we climb instead
for m in (5, 6, 7):
    T = construct_extremal(m)
    h = alternating_ascent(T, restarts=100, seed=0)
    print(f"m={m}: alternating ascent reaches {h.value}, known norm {analytic_norm_upper(m)}")

# meeting a proven upper bound turns the heuristic into a certificate
c = certified_norm(construct_extremal(6), upper=analytic_norm_upper(6))
print(c.method, c.value, "gap", c.gap)
