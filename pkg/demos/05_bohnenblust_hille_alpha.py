"""
Multiple exponents (alpha, beta_m, ..., beta_m)
===============================================

With beta_m chosen to make the exponent admissible, T_m gives a lower
bound for every alpha in [1, 2]. It meets (sqrt 2)^(m-1) only at alpha = 1;
at alpha = 2 it is stuck at sqrt 2 for every m.
"""

from littlewood_lab import beta_m, growth_classification, lower_bound, upper_bound_mixed, verify_table

alphas = (1.0, 1.25, 1.5, 1.75, 2.0)

print("analytic lower bounds")
print("m   " + "".join(f"a={a:<9}" for a in alphas) + "upper")
for m in range(2, 11):
    print(f"{m:<4}" + "".join(f"{lower_bound(a, m):<11.5f}" for a in alphas) + f"{upper_bound_mixed(m):.5f}")

print()
print("beta_m at alpha = 2:", [round(beta_m(2, m), 4) for m in range(2, 8)])
print({a: growth_classification(a) for a in alphas})

# the tensors reproduce the formula up to rounding
print()
for r in verify_table(4, alphas, "exact"):
    err = abs(r.empirical_ratio - r.analytic_lower) / r.analytic_lower
    print(f"m={r.m} alpha={r.alpha:<5} ratio={r.empirical_ratio:.12f} form={r.exact_form:<9} rel err={err:.1e} {r.verdict}")
