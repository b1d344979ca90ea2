"""Recognise values of the form 2^(p/q) with a small denominator."""

from __future__ import annotations

import math
from fractions import Fraction

__all__ = ["dyadic_exponent", "dyadic_form", "format_dyadic"]


def dyadic_exponent(x: float, max_den: int = 64, rtol: float = 1e-12) -> Fraction | None:
    """Rational ``e`` with ``x == 2**e`` to relative tolerance ``rtol``, or None."""
    if not x > 0 or not math.isfinite(x):
        return None
    e = Fraction(math.log2(x)).limit_denominator(max_den)
    if abs(2.0 ** float(e) - x) <= rtol * x:
        return e
    return None


def format_dyadic(e: Fraction) -> str:
    """``2^(k/2)`` whenever the exponent is a half-integer, else ``2^(p/q)`` in lowest terms."""
    if (2 * e).denominator == 1:
        return f"2^({int(2 * e)}/2)"
    return f"2^({e.numerator}/{e.denominator})"


def dyadic_form(x: float, max_den: int = 64, rtol: float = 1e-12) -> str | None:
    e = dyadic_exponent(x, max_den, rtol)
    return None if e is None else format_dyadic(e)
