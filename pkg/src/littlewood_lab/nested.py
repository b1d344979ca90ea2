"""Nested mixed l_q norms of coefficient tensors.

For a multiple exponent ``q = (q_1, ..., q_m)`` the norm is

    ( sum_{j1} ( sum_{j2} ( ... ( sum_{jm} |T_{j1..jm}|^{q_m} )^{q_{m-1}/q_m} ... )^{q_2/q_3} )^{q_1/q_2} )^{1/q_1}

so ``q_m`` acts on the last axis and ``q_1`` on the first.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .dyadic import dyadic_form
from .norms import NormResult, sup_norm, DEFAULT_BUDGET_BITS
from .tensor import CoefficientTensor, TensorError

__all__ = [
    "ExponentTuple",
    "nested_norm",
    "mixed_l1_l2",
    "mixed_l1_l2_squared",
    "is_admissible",
    "Ratio",
    "ratio",
]

ADMISSIBLE_TOL = 1e-12


@dataclass(frozen=True)
class ExponentTuple:
    """Multiple exponent ``(q_1, ..., q_m)`` with every component ``>= 1``."""

    q: tuple[float, ...]

    def __init__(self, q: Iterable[float]):
        q = tuple(float(x) for x in q)
        if len(q) < 1:
            raise TensorError("exponent tuple must be nonempty")
        if any(not x >= 1.0 for x in q):
            raise TensorError(f"exponents must be >= 1, got {list(q)}")
        object.__setattr__(self, "q", q)

    @classmethod
    def parse(cls, text: str) -> "ExponentTuple":
        """Parse ``"1,2,2"``; components may be fractions like ``4/3``."""
        try:
            return cls(float(Fraction(part.strip())) for part in text.split(","))
        except (ValueError, ZeroDivisionError) as exc:
            raise TensorError(f"cannot parse exponents {text!r}: {exc}") from None

    def __len__(self) -> int:
        return len(self.q)

    def __iter__(self):
        return iter(self.q)

    @property
    def admissible(self) -> bool:
        return is_admissible(self)


def _as_exponents(q) -> ExponentTuple:
    return q if isinstance(q, ExponentTuple) else ExponentTuple(q)


def is_admissible(q: ExponentTuple | Sequence[float]) -> bool:
    """``q`` lies in ``[1, 2]^m`` and ``sum 1/q_i == (m + 1) / 2`` within 1e-12."""
    q = _as_exponents(q)
    m = len(q)
    if any(not 1.0 <= x <= 2.0 for x in q):
        return False
    return abs(sum(1.0 / x for x in q) - (m + 1) / 2) <= ADMISSIBLE_TOL


def _group_starts(prefix: np.ndarray) -> np.ndarray:
    # rows are lexicographically sorted, so equal prefixes are contiguous
    if prefix.shape[1] == 0:
        return np.zeros(1, dtype=np.int64)
    change = np.any(prefix[1:] != prefix[:-1], axis=1)
    return np.concatenate([[0], np.flatnonzero(change) + 1])


def nested_norm(T: CoefficientTensor, q: ExponentTuple | Sequence[float]) -> float:
    """Nested mixed norm of ``T`` over its sparse support, axes summed innermost-last."""
    q = _as_exponents(q)
    if len(q) != T.m:
        raise TensorError(f"{len(q)} exponents for a tensor of arity {T.m}")
    if T.nnz == 0:
        return 0.0
    qs = q.q
    idx = T.indices
    # the norm is homogeneous; normalising keeps |a|^q clear of under/overflow
    scale = float(np.abs(T.values).max())
    acc = np.abs(T.values / scale) ** qs[-1]
    for k in range(T.m - 1, 0, -1):
        starts = _group_starts(idx[:, :k])
        acc = np.add.reduceat(acc, starts) ** (qs[k - 1] / qs[k])
        idx = idx[starts]
    return scale * float(acc.sum() ** (1.0 / qs[0]))


def mixed_l1_l2(T: CoefficientTensor) -> float:
    """``sum_{j1} (sum_{j2..jm} |T_{j1..jm}|^2)^(1/2)``."""
    if T.m < 2:
        raise TensorError("the mixed (l1, l2) sum needs arity >= 2")
    return nested_norm(T, (1.0,) + (2.0,) * (T.m - 1))


def mixed_l1_l2_squared(T: CoefficientTensor) -> int | None:
    """Exact square of :func:`mixed_l1_l2` for integer tensors with equal row weights.

    With ``R`` nonzero rows each of squared l2 norm ``n`` the mixed sum is
    ``R * sqrt(n)``, whose square ``R^2 n`` is an integer. Returns None when
    the tensor is not integral or the row weights differ.
    """
    if T.m < 2:
        raise TensorError("the mixed (l1, l2) sum needs arity >= 2")
    if not T.is_integral:
        return None
    if T.nnz == 0:
        return 0
    sq = [int(v) ** 2 for v in T.values.tolist()]
    rows: dict[int, int] = {}
    for i, s in zip(T.indices[:, 0].tolist(), sq):
        rows[i] = rows.get(i, 0) + s
    weights = set(rows.values())
    if len(weights) != 1:
        return None
    (n,) = weights
    return len(rows) ** 2 * n


@dataclass
class Ratio:
    value: float
    nested: float
    norm: NormResult
    q: tuple[float, ...]

    @property
    def method(self) -> str:
        return self.norm.method

    @property
    def exact_form(self) -> str | None:
        return dyadic_form(self.value)


def ratio(
    T: CoefficientTensor,
    q: ExponentTuple | Sequence[float],
    method: str = "exact",
    *,
    upper: float | None = None,
    restarts: int = 100,
    seed: int = 0,
    budget_bits: int = DEFAULT_BUDGET_BITS,
    norm: NormResult | None = None,
) -> Ratio:
    """Empirical lower bound ``nested_norm(T, q) / ||T||`` on the constant for ``q``.

    ``norm`` may carry a precomputed :class:`NormResult`; otherwise it is
    obtained with :func:`~littlewood_lab.norms.sup_norm` and ``method``.
    """
    q = _as_exponents(q)
    nested = nested_norm(T, q)
    if norm is None:
        norm = sup_norm(T, method, upper=upper, restarts=restarts, seed=seed, budget_bits=budget_bits)
    if norm.value == 0:
        raise TensorError("ratio undefined for the zero form")
    return Ratio(nested / float(norm.value), nested, norm, q.q)
