"""The recursive family of extremal m-linear forms ``T_m``.

``T_2(x, y) = x1 y1 + x1 y2 + x2 y1 - x2 y2`` and, for ``m > 2``::

    T_m(x_1, ..., x_m) = (x_m^1 + x_m^2) T_{m-1}(x_1, ..., x_{m-1})
                       + (x_m^1 - x_m^2) T_{m-1}(B^a1 x_1, B^a2 x_2, ..., B^a_{m-1} x_{m-1})

with ``B`` the backward shift on c0 and shift amounts
``a1 = a2 = 2^(m-2)``, ``ak = 2^(m-k)`` for ``3 <= k <= m-1``. Each shift
equals the previous extent of that axis, so the shifted copy occupies a
fresh block of indices and the two terms never overlap.
"""

from __future__ import annotations

import numpy as np

from .tensor import CoefficientTensor, TensorError

__all__ = ["MAX_ARITY", "construct_extremal", "expected_dims", "shift_offsets", "analytic_norm_upper"]

MAX_ARITY = 16

_T2_IDX = np.array([[0, 0], [0, 1], [1, 0], [1, 1]], dtype=np.int64)
_T2_VAL = np.array([1.0, 1.0, 1.0, -1.0])


def _check(m: int) -> None:
    if int(m) != m or m < 2:
        raise TensorError(f"extremal forms need arity m >= 2, got {m}")


def expected_dims(m: int) -> list[int]:
    """Extents ``[2^(m-1), 2^(m-1), 2^(m-2), ..., 2]`` of ``T_m``."""
    _check(m)
    return [2 ** (m - 1), 2 ** (m - 1)] + [2 ** (m - k + 1) for k in range(3, m + 1)]


def shift_offsets(m: int) -> list[int]:
    """Backward-shift amounts applied to axes ``1..m-1`` of ``T_{m-1}`` inside ``T_m``."""
    if m < 3:
        raise TensorError("shift offsets are defined for m >= 3")
    return [2 ** (m - 2), 2 ** (m - 2)] + [2 ** (m - k) for k in range(3, m)]


def construct_extremal(m: int) -> CoefficientTensor:
    """Coefficient tensor of ``T_m``; ``4^(m-1)`` entries, all ``+-1``.

    >>> construct_extremal(3).dims
    (4, 4, 2)
    """
    _check(m)
    if m > MAX_ARITY:
        raise TensorError(
            f"m={m} exceeds the construction cap m <= {MAX_ARITY} "
            f"({4 ** (m - 1)} entries)"
        )
    idx, val = _T2_IDX, _T2_VAL
    for k in range(3, m + 1):
        n = idx.shape[0]
        shifted = idx + np.asarray(shift_offsets(k), dtype=np.int64)
        new_idx = np.empty((4 * n, k), dtype=np.int64)
        # first term: (x_k^1 + x_k^2) T_{k-1}
        new_idx[:n, :-1] = idx
        new_idx[:n, -1] = 0
        new_idx[n : 2 * n, :-1] = idx
        new_idx[n : 2 * n, -1] = 1
        # second term: (x_k^1 - x_k^2) T_{k-1}(shifted arguments)
        new_idx[2 * n : 3 * n, :-1] = shifted
        new_idx[2 * n : 3 * n, -1] = 0
        new_idx[3 * n :, :-1] = shifted
        new_idx[3 * n :, -1] = 1
        idx = new_idx
        val = np.concatenate([val, val, val, -val])
    # the row blocks above are not globally sorted; let the constructor
    # canonicalise (it also re-checks disjointness of the two terms)
    return CoefficientTensor(expected_dims(m), idx, val)


def analytic_norm_upper(m: int) -> int:
    """Operator norm ``||T_m|| = 2^(m-1)``."""
    _check(m)
    return 2 ** (m - 1)
