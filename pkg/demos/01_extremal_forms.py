"""
Building the extremal forms T_m
===============================

Each T_m doubles the previous one twice: once as is, once with every
argument pushed to a fresh block of indices. The result has 4^(m-1)
coefficients, all equal to +1 or -1.
"""

import numpy as np

from littlewood_lab import construct_extremal, evaluate

# T_2 is the 2x2 sign pattern [[1, 1], [1, -1]]
T2 = construct_extremal(2)
print(T2.to_dense())

# its entries, 1-based, in lexicographic order
for idx, c in T2.entries():
    print(idx, c)

# T_3 lives on a 4 x 4 x 2 grid with 16 nonzero coefficients
T3 = construct_extremal(3)
print(T3.dims, T3.nnz)
print(T3.to_dense()[:, :, 0])
print(T3.to_dense()[:, :, 1])

# evaluating at a sign vertex is exact for integer forms
x = [np.ones(d, dtype=int) for d in T3.dims]
print("T_3(1, ..., 1) =", evaluate(T3, x))

# the sizes grow quickly: every step multiplies nnz by four
for m in range(2, 11):
    T = construct_extremal(m)
    rows = np.bincount(T.indices[:, 0])
    print(f"m={m:2d}  dims={list(T.dims)}  nnz={T.nnz:7d}  entries per row={set(rows.tolist())}")
