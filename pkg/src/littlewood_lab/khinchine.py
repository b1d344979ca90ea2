"""Khinchine inequality for Rademacher sums: optimal constants and exact moments.

For real scalars and ``0 < p <= 2`` the optimal upper constant is ``B_p = 1``
and Haagerup's lower constant is

* ``A_p = 2^(1/2 - 1/p)`` for ``0 < p <= p0``,
* ``A_p = sqrt(2) * (Gamma((p+1)/2) / sqrt(pi))^(1/p)`` for ``p0 < p <= 2``,

where ``p0 ~ 1.847`` solves ``Gamma((p0+1)/2) = sqrt(pi)/2`` in ``(1, 2)``.

Integrals over ``[0, 1]`` against Rademacher functions equal uniform
averages over sign patterns, which is how moments are computed exactly.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .tensor import CoefficientTensor

__all__ = [
    "EXACT_MAX_TERMS",
    "KhinchineConstants",
    "MomentEstimate",
    "KhinchineReport",
    "gamma",
    "solve_p0",
    "p0",
    "haagerup_A",
    "rademacher_moment",
    "multiple_rademacher_moment",
    "verify_khinchine",
    "verify_multiple_khinchine",
    "moment_comparison_constant",
]

EXACT_MAX_TERMS = 20
DEFAULT_SAMPLES = 10**6
SQRT_PI = math.sqrt(math.pi)

# Gamma((p+1)/2) decreases from Gamma(1) = 1 to its minimum near p = 1.923
# and climbs back to sqrt(pi)/2 exactly at p = 2, so p = 2 is a second root;
# the bracket stops short of the minimum to isolate p0.
_P0_BRACKET = (1.0, 1.9)


class KhinchineError(ValueError):
    pass


@dataclass(frozen=True)
class KhinchineConstants:
    p: float
    A: float
    B: float
    branch: str  # "power": 2^(1/2-1/p), "gamma": Gamma-function formula


@dataclass(frozen=True)
class MomentEstimate:
    """Monte Carlo estimate of a Rademacher moment."""

    value: float
    samples: int
    stderr: float
    seed: int


def gamma(x: float) -> float:
    """Gamma function for ``x > 0`` (``math.gamma``, ~1e-15 relative)."""
    if not x > 0:
        raise KhinchineError(f"gamma is only provided for x > 0, got {x}")
    return math.gamma(x)


def _p0_residual(p: float) -> float:
    return gamma((p + 1) / 2) - SQRT_PI / 2


def solve_p0(tol: float = 1e-12) -> float:
    """Root of ``Gamma((p+1)/2) = sqrt(pi)/2`` in ``(1, 2)`` by bisection.

    >>> round(solve_p0(), 6)
    1.847416
    """
    if not tol > 0:
        raise KhinchineError("tol must be positive")
    lo, hi = _P0_BRACKET
    flo, fhi = _p0_residual(lo), _p0_residual(hi)
    if not (flo > 0 > fhi):
        raise KhinchineError(f"no sign change on [{lo}, {hi}]: f={flo!r}, {fhi!r}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        fm = _p0_residual(mid)
        if fm == 0:
            return mid
        if fm > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@functools.lru_cache(maxsize=1)
def p0() -> float:
    return solve_p0(1e-15)


def haagerup_A(p: float) -> KhinchineConstants:
    """Optimal Khinchine constants ``(A_p, B_p = 1)`` for ``0 < p <= 2``."""
    if not 0 < p <= 2:
        raise KhinchineError(f"p must lie in (0, 2], got {p}")
    if p <= p0():
        return KhinchineConstants(p, 2.0 ** (0.5 - 1.0 / p), 1.0, "power")
    A = math.sqrt(2.0) * (gamma((p + 1) / 2) / SQRT_PI) ** (1.0 / p)
    # A_2 = 1 analytically; rounding lands one ulp above at p = 2
    A = min(A, 1.0)
    return KhinchineConstants(p, A, 1.0, "gamma")


def moment_comparison_constant(p: float, r: float) -> float:
    """``B_p / A_r``: the p-th moment of a Rademacher sum is at most this times its r-th moment."""
    if not (0 < p <= 2 and 0 < r <= 2):
        raise KhinchineError(f"exponents must lie in (0, 2], got p={p}, r={r}")
    return haagerup_A(p).B / haagerup_A(r).A


def _check_p(p: float) -> None:
    if not p > 0:
        raise KhinchineError(f"p must be positive, got {p}")


def _sign_sums(a: np.ndarray) -> np.ndarray:
    # sums over patterns with the first sign fixed to +1; |.|^p is even so
    # this half of the patterns already gives the full average
    s = a[:1].copy()
    for x in a[1:]:
        s = np.concatenate([s + x, s - x])
    return s


def _mc_finish(total: float, total_sq: float, n: int, p: float, seed: int) -> MomentEstimate:
    mean = total / n
    var = max(total_sq / n - mean * mean, 0.0)
    se_mean = math.sqrt(var / n)
    value = mean ** (1.0 / p)
    # delta method for the p-th root
    stderr = (value / (p * mean)) * se_mean if mean > 0 else 0.0
    return MomentEstimate(value, n, stderr, seed)


def rademacher_moment(
    a: Sequence[float],
    p: float,
    *,
    monte_carlo: bool = False,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
) -> float | MomentEstimate:
    """``(E |sum_n a_n eps_n|^p)^(1/p)`` for independent random signs ``eps``.

    Exact (average over all ``2^N`` sign patterns) for ``N <= 20``. With
    ``monte_carlo=True`` a seeded sample mean is returned as a
    :class:`MomentEstimate` instead.
    """
    _check_p(p)
    a = np.asarray(a, dtype=np.float64).reshape(-1)
    N = a.shape[0]
    if monte_carlo:
        rng = np.random.default_rng(seed)
        total = total_sq = 0.0
        done = 0
        batch = max(1, min(samples, 2**22 // max(N, 1)))
        while done < samples:
            b = min(batch, samples - done)
            eps = 1 - 2 * rng.integers(0, 2, size=(b, N), dtype=np.int8)
            x = np.abs(eps @ a) ** p
            total += float(x.sum())
            total_sq += float((x * x).sum())
            done += b
        return _mc_finish(total, total_sq, samples, p, seed)
    if N > EXACT_MAX_TERMS:
        raise KhinchineError(
            f"exact moment limited to N <= {EXACT_MAX_TERMS} terms (got {N}); pass monte_carlo=True"
        )
    if N == 0:
        return 0.0
    s = _sign_sums(a)
    return float(np.mean(np.abs(s) ** p) ** (1.0 / p))


def _all_signs(d: int) -> np.ndarray:
    t = np.arange(2**d, dtype=np.int64)
    return (1 - 2 * ((t[:, None] >> np.arange(d)) & 1)).astype(np.float64)


def multiple_rademacher_moment(
    T: CoefficientTensor,
    p: float,
    *,
    monte_carlo: bool = False,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
) -> float | MomentEstimate:
    """``(E |sum a_{i1..im} eps^1_{i1} ... eps^m_{im}|^p)^(1/p)`` with one independent sign vector per axis.

    Exact when ``sum(dims) <= 20``; Monte Carlo beyond that only on request.
    """
    _check_p(p)
    if monte_carlo:
        rng = np.random.default_rng(seed)
        total = total_sq = 0.0
        done = 0
        batch = max(1, min(samples, 2**22 // max(T.nnz, 1)))
        while done < samples:
            b = min(batch, samples - done)
            prod = np.broadcast_to(T.values, (b, T.nnz)).copy()
            for k, d in enumerate(T.dims):
                eps = 1 - 2 * rng.integers(0, 2, size=(b, d), dtype=np.int8)
                prod *= eps[:, T.indices[:, k]]
            x = np.abs(prod.sum(axis=1)) ** p
            total += float(x.sum())
            total_sq += float((x * x).sum())
            done += b
        return _mc_finish(total, total_sq, samples, p, seed)
    if sum(T.dims) > EXACT_MAX_TERMS:
        raise KhinchineError(
            f"exact multiple moment limited to sum(dims) <= {EXACT_MAX_TERMS} (got {sum(T.dims)}); "
            "pass monte_carlo=True"
        )
    X = T.to_dense()
    for d in T.dims:
        # contract the leading coefficient axis, append its pattern axis
        X = np.tensordot(X, _all_signs(d), axes=([0], [1]))
    return float(np.mean(np.abs(X) ** p) ** (1.0 / p))


@dataclass(frozen=True)
class KhinchineReport:
    p: float
    A: float
    B: float
    l2: float
    moment: float
    lower: float
    upper: float
    lower_margin: float
    upper_margin: float
    holds: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _report(p: float, A: float, B: float, l2: float, moment: float) -> KhinchineReport:
    lower, upper = A * l2, B * l2
    lo_m, up_m = moment - lower, upper - moment
    # rounding in the 2^N-term averages is far below this scale
    tol = 1e-12 * max(l2, 1e-300)
    return KhinchineReport(p, A, B, l2, moment, lower, upper, lo_m, up_m, lo_m >= -tol and up_m >= -tol)


def verify_khinchine(a: Sequence[float], p: float) -> KhinchineReport:
    """Check ``A_p ||a||_2 <= moment_p(a) <= B_p ||a||_2`` with exact moments."""
    c = haagerup_A(p)
    a = np.asarray(a, dtype=np.float64).reshape(-1)
    l2 = float(np.sqrt(np.sum(a * a)))
    return _report(p, c.A, c.B, l2, rademacher_moment(a, p))


def verify_multiple_khinchine(T: CoefficientTensor, p: float) -> KhinchineReport:
    """Multiple Khinchine sandwich with constants ``A_p^m`` and ``B_p^m`` around the Frobenius norm."""
    c = haagerup_A(p)
    fro = float(np.sqrt(np.sum(T.values * T.values)))
    return _report(p, c.A**T.m, c.B**T.m, fro, multiple_rademacher_moment(T, p))
