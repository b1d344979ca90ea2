"""
The mixed (l1, l2) constant
===========================

For T_m the l1-of-l2 sum is 2^(m-1) * sqrt(2^(m-1)) and the operator norm
is 2^(m-1), so the ratio is (sqrt 2)^(m-1). That matches the universal
upper bound, hence it is optimal.
"""

from littlewood_lab import construct_extremal, mixed_l1_l2, verify_theorem_kjh
from littlewood_lab.nested import mixed_l1_l2_squared

for m in range(2, 7):
    T = construct_extremal(m)
    print(f"m={m}: l1(l2) sum = {mixed_l1_l2(T):.6f}, squared exactly = {mixed_l1_l2_squared(T)}")

# exact norms up to m = 4, certified heuristic norms for m = 5, 6
for m in range(2, 7):
    mode = "exact" if m <= 4 else "certified"
    r = verify_theorem_kjh(m, mode)
    print(
        f"m={m}  ratio={r.empirical_ratio:.12f}  form={r.exact_form}  "
        f"ratio^2={r.details['ratio_squared']}  bounds=[{r.analytic_lower:.6f}, {r.analytic_upper:.6f}]  "
        f"{r.norm_method}: {r.verdict}"
    )
