"""Operator (sup) norm of a finitely supported m-linear form over the unit ball of c0^m.

A multilinear form attains ``sup |T|`` over a product of cubes at a vertex,
so the norm is a maximum over sign vectors. Fixing every argument except
one leaves a linear functional whose maximum over the cube is the l1 norm
of its coefficient vector; :func:`linear_resolve` computes that closed form
and the other routines reduce to choosing signs on the remaining axes.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .tensor import CoefficientTensor, SignAssignment, TensorError, evaluate

__all__ = [
    "DEFAULT_BUDGET_BITS",
    "DEEP_BUDGET_BITS",
    "NormError",
    "BudgetExceededError",
    "InvalidBoundError",
    "NormResult",
    "resolved_axis",
    "inner_sums",
    "linear_resolve",
    "exact_sup_norm",
    "alternating_ascent",
    "certified_norm",
    "sup_norm",
]

DEFAULT_BUDGET_BITS = 26
DEEP_BUDGET_BITS = 30

# Gray-code steps per independently recomputed block; fixed so that the
# block layout, and with it every floating-point sum, never depends on the
# number of workers.
_BLOCK_BITS = 16
_INNER_MAX_BITS = 12
_INNER_MAX_CELLS_LOG2 = 23
_MAX_SWEEPS = 10_000


class NormError(TensorError):
    pass


class BudgetExceededError(NormError):
    """Exact enumeration would exceed the configured budget."""


class InvalidBoundError(NormError):
    """A supplied analytic upper bound is beaten by an explicit vertex."""


@dataclass
class NormResult:
    value: float | int
    certificate: SignAssignment
    method: str  # "exact" | "heuristic" | "certified"
    stats: dict = field(default_factory=dict)
    upper: float | int | None = None
    gap: float | int | None = None

    def to_dict(self) -> dict:
        out = {
            "value": self.value,
            "method": self.method,
            "certificate": self.certificate.tolist(),
            "stats": dict(self.stats),
        }
        if self.upper is not None:
            out["upper"] = self.upper
            out["gap"] = self.gap
        return out


def resolved_axis(T: CoefficientTensor) -> int:
    """1-based axis of largest extent, ties to the lowest index."""
    return int(np.argmax(T.dims)) + 1


def _exact_sums(T: CoefficientTensor) -> bool:
    # float64 partial sums of integers stay exact below 2^53
    return T.is_integral and (T.nnz == 0 or float(np.abs(T.values).sum()) < 2.0**53)


def inner_sums(T: CoefficientTensor, axis: int, signs: Sequence[Sequence[int]]) -> np.ndarray:
    """Coefficient vector of the linear functional left on ``axis``.

    ``signs`` holds one vector per remaining axis, in ascending axis order.
    Entry ``j`` of the result is ``T(s_1, ..., e_j, ..., s_m)``.
    """
    if not 1 <= axis <= T.m:
        raise NormError(f"axis {axis} out of range 1..{T.m}")
    if len(signs) != T.m - 1:
        raise NormError(f"expected {T.m - 1} sign vectors (all axes except {axis}), got {len(signs)}")
    a = axis - 1
    others = [k for k in range(T.m) if k != a]
    prod = T.values.copy()
    for k, s in zip(others, signs):
        s = np.asarray(s).reshape(-1)
        if s.shape[0] != T.dims[k]:
            raise NormError(f"axis {k + 1}: sign vector has length {s.shape[0]}, expected {T.dims[k]}")
        prod *= s[T.indices[:, k]]
    v = np.bincount(T.indices[:, a], weights=prod, minlength=T.dims[a])
    if _exact_sums(T):
        return v.astype(np.int64)
    return v


def linear_resolve(T: CoefficientTensor, axis: int, signs: Sequence[Sequence[int]]) -> tuple[float | int, np.ndarray]:
    """Maximise over the designated axis given signs on all the others.

    Returns ``(value, optimal_signs)`` where ``value`` is the l1 norm of
    :func:`inner_sums` and the signs are those of the inner sums, with zero
    mapped to ``+1``.
    """
    v = inner_sums(T, axis, signs)
    s = np.where(v >= 0, 1, -1).astype(np.int64)
    total = np.abs(v).sum()
    return (int(total) if v.dtype == np.int64 else float(total)), s


def _gray(t):
    return t ^ (t >> 1)


def _ctz(t: int) -> int:
    return (t & -t).bit_length() - 1


class _FlipGroup:
    """Entries touched by one outer sign bit, sorted by resolved-axis index."""

    __slots__ = ("idx", "cols", "S", "full", "Q")

    def __init__(self, idx: np.ndarray, res: np.ndarray, width: int, P: np.ndarray, cache: bool):
        idx = idx[np.argsort(res[idx], kind="stable")]
        self.idx = idx
        self.cols, pos = np.unique(res[idx], return_inverse=True)
        # one-hot map from the group's entries to its resolved-axis columns,
        # scaled by -2: flipping a sign moves each inner sum by -2 * term
        self.S = np.zeros((idx.shape[0], self.cols.shape[0]))
        self.S[np.arange(idx.shape[0]), pos] = -2
        self.full = self.cols.shape[0] == width
        self.Q = np.ascontiguousarray(P[:, idx]) if cache else None

    def delta(self, P: np.ndarray, c: np.ndarray) -> np.ndarray:
        Q = P[:, self.idx] if self.Q is None else self.Q
        return Q @ (c[self.idx, None] * self.S)


class _GrayPlan:
    """Bit layout and precomputed tables for the exact enumeration.

    Free axes (all but the resolved one) contribute one sign bit per index,
    concatenated from the last axis down, so the low bits belong to the
    short trailing axes whose indices are shared by many entries. The
    lowest ``inner`` bits are enumerated at once as the rows of a table
    ``P``; the remaining outer bits follow a reflected Gray code, so each
    outer step flips one sign and updates only the resolved-axis sums of
    the entries sharing that (axis, index).

    Negating a whole free axis negates every resolved-axis sum and leaves
    the objective unchanged, so the top outer bit is pinned to ``+1``.

    Arithmetic is float64 throughout; for integer tensors every partial sum
    is an integer below 2^53, so results are exact.
    """

    def __init__(self, T: CoefficientTensor, r: int):
        self.T = T
        self.r = r
        self.free = [k for k in range(T.m) if k != r]
        order = self.free[::-1]
        start = np.cumsum([0] + [T.dims[k] for k in order])
        self.axis_start = {k: int(s) for k, s in zip(order, start)}
        self.nbits = int(start[-1])
        nnz = T.nnz
        self.coef = T.values.astype(np.float64)
        self.bitpos = np.stack(
            [self.axis_start[k] + T.indices[:, k] for k in self.free], axis=1
        ) if self.free else np.zeros((nnz, 0), dtype=np.int64)

        cap = max(0, _INNER_MAX_CELLS_LOG2 - max(0, math.ceil(math.log2(max(nnz, 1)))))
        self.inner = min(self.nbits, _INNER_MAX_BITS, cap)
        rows = _gray(np.arange(2**self.inner, dtype=np.int64))
        P = np.ones((rows.shape[0], nnz))
        for j in range(self.bitpos.shape[1]):
            bp = self.bitpos[:, j]
            sel = np.flatnonzero(bp < self.inner)
            if sel.size:
                P[:, sel] *= 1 - 2 * ((rows[:, None] >> bp[sel][None, :]) & 1)
        self.P = P
        res = T.indices[:, r]
        R = np.zeros((nnz, T.dims[r]))
        R[np.arange(nnz), res] = 1
        self.R = R

        self.outer = self.nbits - self.inner
        cache = P.size * max(1, len(self.free)) <= 2**24
        self.groups = [
            _FlipGroup(np.flatnonzero(np.any(self.bitpos == self.inner + b, axis=1)), res, T.dims[r], P, cache)
            for b in range(self.outer)
        ]
        steps = max(self.outer - 1, 0)
        self.block_bits = min(steps, _BLOCK_BITS)
        self.nblocks = 2 ** (steps - self.block_bits)
        self.evaluations = 2**self.inner * 2**steps

    def outer_coef(self, g: int) -> np.ndarray:
        c = self.coef.copy()
        for j in range(self.bitpos.shape[1]):
            bp = self.bitpos[:, j]
            sel = np.flatnonzero(bp >= self.inner)
            if sel.size:
                c[sel] *= 1 - 2 * ((g >> (bp[sel] - self.inner)) & 1)
        return c

    def run_block(self, b: int) -> tuple[float, int, int]:
        """Best ``(value, outer_counter, inner_row)`` in block ``b``; first maximum wins."""
        t0 = b << self.block_bits
        c = self.outer_coef(int(_gray(t0)))
        W = (self.P * c) @ self.R
        absW = np.empty_like(W)
        ones = np.ones(W.shape[1])
        best = (-1.0, t0, 0)
        for t in range(t0, t0 + 2**self.block_bits):
            if t != t0:
                g = self.groups[_ctz(t)]
                D = g.delta(self.P, c)
                if g.full:
                    W += D
                else:
                    W[:, g.cols] += D
                c[g.idx] *= -1
            tot = np.abs(W, out=absW) @ ones
            row = int(np.argmax(tot))
            if tot[row] > best[0]:
                best = (float(tot[row]), t, row)
        return best

    def signs_for(self, t: int, row: int) -> list[np.ndarray]:
        g = int(_gray(t))
        u = int(_gray(row))
        out = []
        for k in self.free:
            s0 = self.axis_start[k]
            bits = []
            for p in range(s0, s0 + self.T.dims[k]):
                bit = (u >> p) & 1 if p < self.inner else (g >> (p - self.inner)) & 1
                bits.append(1 - 2 * bit)
            out.append(np.array(bits, dtype=np.int64))
        return out


def _certificate(T: CoefficientTensor, axis: int, free_signs: list[np.ndarray]) -> tuple[float | int, SignAssignment]:
    value, s_r = linear_resolve(T, axis, free_signs)
    full = list(free_signs)
    full.insert(axis - 1, s_r)
    return value, SignAssignment(full)


def exact_sup_norm(
    T: CoefficientTensor, *, budget_bits: int = DEFAULT_BUDGET_BITS, workers: int = 1
) -> NormResult:
    """Exact operator norm by Gray-code enumeration of sign vertices.

    Every axis except the one of largest extent is enumerated; that axis is
    resolved in closed form. Raises :class:`BudgetExceededError` when the
    number of enumerated sign bits exceeds ``budget_bits``.

    ``workers > 1`` evaluates the fixed sign-prefix blocks concurrently; the
    result is identical to the sequential run.
    """
    r = resolved_axis(T)
    nbits = sum(T.dims) - T.dims[r - 1]
    if nbits > budget_bits:
        raise BudgetExceededError(
            f"exact enumeration needs 2^{nbits} sign patterns, budget is 2^{budget_bits}; "
            "raise the budget (deep mode) or use alternating_ascent / certified_norm"
        )
    stats = {"sign_patterns": 2**nbits, "evaluations": 2**nbits, "restarts": 0, "iterations": 0, "resolved_axis": r}
    if T.nnz == 0:
        cert = SignAssignment([np.ones(d, dtype=np.int64) for d in T.dims])
        return NormResult(0 if T.is_integral else 0.0, cert, "exact", {**stats, "blocks": 1})

    plan = _GrayPlan(T, r - 1)
    blocks = range(plan.nblocks)
    if workers > 1 and plan.nblocks > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(plan.run_block, blocks))
    else:
        results = [plan.run_block(b) for b in blocks]
    # max over blocks, ties to the lowest block: same answer as one sequential sweep
    best = max(range(len(results)), key=lambda i: (results[i][0], -i))
    _, t, row = results[best]
    value, cert = _certificate(T, r, plan.signs_for(t, row))
    stats.update(
        evaluations=plan.evaluations,
        blocks=plan.nblocks,
        inner_bits=plan.inner,
        iterations=plan.nblocks * 2**plan.block_bits,
    )
    return NormResult(value, cert, "exact", stats)


def _random_signs(rng: np.random.Generator, dims: Sequence[int]) -> list[np.ndarray]:
    return [1 - 2 * rng.integers(0, 2, size=d, dtype=np.int64) for d in dims]


def alternating_ascent(
    T: CoefficientTensor, restarts: int = 10, seed: int = 0, *, trace: list | None = None
) -> NormResult:
    """Heuristic lower bound for the operator norm.

    Each restart draws random signs from its own child of
    ``SeedSequence(seed)`` and sweeps the axes, replacing each sign vector
    by its closed-form optimum given the others, until a full sweep changes
    nothing. The best vertex over all restarts is returned.

    If ``trace`` is a list, the objective after each sweep of each restart
    is appended to it as ``(restart, sweep, value)``.
    """
    if restarts < 1:
        raise NormError("restarts must be >= 1")
    children = np.random.SeedSequence(seed).spawn(restarts)
    m = T.m
    best_val, best_signs = None, None
    evaluations = iterations = 0
    tol = 0.0 if _exact_sums(T) else 1e-12 * max(1.0, float(np.abs(T.values).sum()))
    for i, child in enumerate(children):
        signs = _random_signs(np.random.default_rng(child), T.dims)
        prev = abs(evaluate(T, signs))
        for sweep in range(1, _MAX_SWEEPS + 1):
            changed = False
            obj = prev
            for k in range(m):
                v = inner_sums(T, k + 1, signs[:k] + signs[k + 1 :])
                evaluations += 1
                new = np.where(v >= 0, 1, -1).astype(np.int64)
                obj = np.abs(v).sum()
                if not np.array_equal(new, signs[k]):
                    signs[k] = new
                    changed = True
            obj = int(obj) if _exact_sums(T) else float(obj)
            if obj < prev - tol:
                raise RuntimeError(f"ascent objective decreased: {prev} -> {obj}")
            iterations += 1
            if trace is not None:
                trace.append((i, sweep, obj))
            prev = obj
            if not changed:
                break
        val = evaluate(T, signs)
        if best_val is None or val > best_val:
            best_val, best_signs = val, [s.copy() for s in signs]
    stats = {"evaluations": evaluations, "restarts": restarts, "iterations": iterations, "seed": seed}
    return NormResult(best_val, SignAssignment(best_signs), "heuristic", stats)


def _meets(value: float | int, upper: float | int) -> bool:
    if isinstance(value, int) and float(upper).is_integer():
        return value == int(upper)
    return abs(value - upper) <= 1e-9 * max(abs(upper), 1e-300)


def certified_norm(T: CoefficientTensor, upper: float, restarts: int = 100, seed: int = 0) -> NormResult:
    """Alternating ascent checked against a caller-supplied analytic upper bound.

    Returns ``method="certified"`` when the heuristic attains ``upper``,
    otherwise the heuristic result with ``gap = upper - value``. Raises
    :class:`InvalidBoundError` if the heuristic beats ``upper``.
    """
    res = alternating_ascent(T, restarts=restarts, seed=seed)
    if res.value > upper and not _meets(res.value, upper):
        raise InvalidBoundError(f"vertex with |T| = {res.value} exceeds the supplied upper bound {upper}")
    res.upper = upper
    if _meets(res.value, upper):
        res.method = "certified"
        res.gap = 0
    else:
        res.gap = upper - res.value
    return res


def sup_norm(
    T: CoefficientTensor,
    method: str = "exact",
    *,
    upper: float | None = None,
    restarts: int = 100,
    seed: int = 0,
    budget_bits: int = DEFAULT_BUDGET_BITS,
    workers: int = 1,
) -> NormResult:
    """Dispatch on ``method``: ``exact``, ``heuristic``/``alternating``, ``certified`` or ``auto``.

    ``auto`` is exact within the budget, otherwise certified (needs ``upper``)
    or heuristic.
    """
    if method == "auto":
        nbits = sum(T.dims) - max(T.dims)
        if nbits <= budget_bits:
            method = "exact"
        else:
            method = "certified" if upper is not None else "heuristic"
    if method == "exact":
        return exact_sup_norm(T, budget_bits=budget_bits, workers=workers)
    if method in ("heuristic", "alternating"):
        return alternating_ascent(T, restarts=restarts, seed=seed)
    if method == "certified":
        if upper is None:
            raise NormError("certified norm needs an analytic upper bound")
        return certified_norm(T, upper, restarts=restarts, seed=seed)
    raise NormError(f"unknown norm method {method!r}")
