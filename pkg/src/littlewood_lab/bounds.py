"""Analytic bounds for generalized Bohnenblust--Hille constants and theorem checks.

For the multiple exponent ``q = (alpha, beta_m, ..., beta_m)`` with
``beta_m = (2 alpha m - 2 alpha) / (alpha m - 2 + alpha)`` the extremal
forms ``T_m`` give the lower bound ``2^((2m - alpha m - 4 + 3 alpha) / (2 alpha))``
on ``C_{m,inf,q}``, while ``(sqrt 2)^(m-1)`` bounds every admissible ``q``
from above. At ``alpha = 1`` the two coincide, so ``(sqrt 2)^(m-1)`` is the
optimal constant of the mixed (l1, l2)-Littlewood inequality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .dyadic import dyadic_form, format_dyadic
from .extremal import analytic_norm_upper, construct_extremal
from .nested import mixed_l1_l2_squared, ratio
from .norms import DEFAULT_BUDGET_BITS, sup_norm
from .tensor import TensorError

__all__ = [
    "ConstantReport",
    "beta_m",
    "lower_bound",
    "upper_bound_mixed",
    "growth_classification",
    "verify_theorem_kjh",
    "verify_theorem_alpha",
    "verify_table",
]

RTOL = 1e-9


class BoundsError(TensorError):
    pass


def _check_alpha(alpha: float) -> None:
    if not 1.0 <= alpha <= 2.0:
        raise BoundsError(f"alpha must lie in [1, 2], got {alpha}")


def _check_m(m: int) -> None:
    if int(m) != m or m < 2:
        raise BoundsError(f"arity m must be an integer >= 2, got {m}")


def beta_m(alpha: float, m: int) -> float:
    """Exponent repeated after ``alpha`` so that ``(alpha, beta, ..., beta)`` is admissible."""
    _check_alpha(alpha)
    _check_m(m)
    return (2 * alpha * m - 2 * alpha) / (alpha * m - 2 + alpha)


def lower_bound_exponent(alpha: float, m: int) -> float:
    _check_alpha(alpha)
    _check_m(m)
    return (2 * m - alpha * m - 4 + 3 * alpha) / (2 * alpha)


def lower_bound(alpha: float, m: int) -> float:
    """``2^((2m - alpha m - 4 + 3 alpha) / (2 alpha))``."""
    return 2.0 ** lower_bound_exponent(alpha, m)


def upper_bound_mixed(m: int) -> float:
    """``(sqrt 2)^(m-1)``, valid for every admissible multiple exponent."""
    _check_m(m)
    return 2.0 ** ((m - 1) / 2)


def growth_classification(alpha: float) -> str:
    """Growth in ``m`` of the optimal constants for ``(alpha, beta_m, ..., beta_m)``.

    Exponential for ``alpha < 2`` (the lower bound above is exponential in
    ``m``), sublinear at ``alpha = 2``. The latter is a known analytic
    result and is not computed here.
    """
    _check_alpha(alpha)
    return "exponential" if alpha < 2 else "sublinear"


@dataclass
class ConstantReport:
    m: int
    q: tuple[float, ...]
    empirical_ratio: float
    exact_form: str | None
    analytic_lower: float
    analytic_upper: float
    norm_method: str
    verdict: str  # "pass" | "gap" | "fail"
    alpha: float = 1.0
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "alpha": self.alpha,
            "q": list(self.q),
            "empirical_ratio": self.empirical_ratio,
            "exact_form": self.exact_form,
            "analytic_lower": self.analytic_lower,
            "analytic_upper": self.analytic_upper,
            "norm_method": self.norm_method,
            "verdict": self.verdict,
        }


def _extremal_norm(m: int, mode: str, restarts: int, seed: int, budget_bits: int):
    if mode not in ("exact", "certified", "auto"):
        raise BoundsError(f"mode must be exact, certified or auto, got {mode!r}")
    T = construct_extremal(m)
    norm = sup_norm(
        T, mode, upper=analytic_norm_upper(m), restarts=restarts, seed=seed, budget_bits=budget_bits
    )
    return T, norm


def _verdict(value: float, lower: float, upper: float, method: str, matched: bool | None = None) -> str:
    if method not in ("exact", "certified"):
        return "gap"
    if value > upper * (1 + RTOL):
        return "fail"
    if matched is None:
        matched = abs(value - lower) <= RTOL * lower
    return "pass" if matched else "fail"


def verify_theorem_kjh(
    m: int,
    mode: str = "exact",
    *,
    restarts: int = 100,
    seed: int = 0,
    budget_bits: int = DEFAULT_BUDGET_BITS,
) -> ConstantReport:
    """Reproduce ``(sqrt 2)^(m-1)`` as the mixed (l1, l2) ratio of ``T_m``.

    The comparison is done on the square of the ratio in exact rational
    arithmetic: with ``R`` rows of squared weight ``n`` the mixed sum is
    ``R sqrt(n)``, so ``ratio^2 = R^2 n / ||T_m||^2`` and must equal
    ``2^(m-1)``. The verdict is ``pass`` only if this holds, the norm is
    exact or certified, and the analytic lower and upper bounds coincide.
    """
    _check_m(m)
    T, norm = _extremal_norm(m, mode, restarts, seed, budget_bits)
    q = (1.0,) + (2.0,) * (m - 1)
    r = ratio(T, q, norm=norm)
    lower, upper = lower_bound(1.0, m), upper_bound_mixed(m)

    sq = mixed_l1_l2_squared(T)
    squared = None
    if sq is not None and isinstance(norm.value, int):
        squared = Fraction(sq, norm.value**2)
    if squared is not None:
        matched = squared == 2 ** (m - 1)
        k = squared.numerator.bit_length() - 1
        is_pow2 = squared.denominator == 1 and squared.numerator == 1 << k
        exact_form = format_dyadic(Fraction(k, 2)) if is_pow2 else None
    else:
        matched = None
        exact_form = r.exact_form
    verdict = _verdict(r.value, lower, upper, norm.method, matched)
    if verdict == "pass" and not math.isclose(lower, upper, rel_tol=1e-12):
        verdict = "fail"
    details = {
        "norm": norm.value,
        "analytic_norm": analytic_norm_upper(m),
        "nested": r.nested,
        "ratio_squared": None if squared is None else str(squared),
        "norm_stats": norm.stats,
    }
    return ConstantReport(m, q, r.value, exact_form, lower, upper, norm.method, verdict, 1.0, details)


def verify_theorem_alpha(
    alpha: float,
    m: int,
    mode: str = "exact",
    *,
    restarts: int = 100,
    seed: int = 0,
    budget_bits: int = DEFAULT_BUDGET_BITS,
) -> ConstantReport:
    """Compare ``ratio(T_m, (alpha, beta_m, ..., beta_m))`` with the analytic lower bound.

    ``pass`` means agreement within 1e-9 relative with an exact or
    certified norm. For ``alpha > 1`` the upper bound ``(sqrt 2)^(m-1)``
    stays strictly above, and no optimality is claimed.
    """
    _check_alpha(alpha)
    _check_m(m)
    if alpha == 1:
        return verify_theorem_kjh(m, mode, restarts=restarts, seed=seed, budget_bits=budget_bits)
    T, norm = _extremal_norm(m, mode, restarts, seed, budget_bits)
    b = beta_m(alpha, m)
    q = (float(alpha),) + (b,) * (m - 1)
    r = ratio(T, q, norm=norm)
    lower, upper = lower_bound(alpha, m), upper_bound_mixed(m)
    verdict = _verdict(r.value, lower, upper, norm.method)
    details = {"norm": norm.value, "analytic_norm": analytic_norm_upper(m), "nested": r.nested, "norm_stats": norm.stats}
    return ConstantReport(
        m, q, r.value, dyadic_form(r.value), lower, upper, norm.method, verdict, float(alpha), details
    )


def verify_table(
    m_max: int,
    alphas: Iterable[float] = (1.0,),
    mode: str = "exact",
    *,
    restarts: int = 100,
    seed: int = 0,
    budget_bits: int = DEFAULT_BUDGET_BITS,
) -> list[ConstantReport]:
    """One report per ``(m, alpha)``, ``m = 2..m_max``, ordered by ``m`` then ``alpha``."""
    _check_m(m_max)
    alphas = list(alphas)
    return [
        verify_theorem_alpha(a, m, mode, restarts=restarts, seed=seed, budget_bits=budget_bits)
        for m in range(2, m_max + 1)
        for a in alphas
    ]
