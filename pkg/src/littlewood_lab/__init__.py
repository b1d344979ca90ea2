"""Exact and certified computations around the mixed (l1, l2)-Littlewood inequality.

The package builds the extremal m-linear forms ``T_m``, computes their
operator norms over the unit ball of c0 and their nested mixed l_q norms,
and checks the resulting constants against the analytic bounds
``(sqrt 2)^(m-1)`` and ``2^((2m - alpha m - 4 + 3 alpha) / (2 alpha))``.
Optimal Khinchine constants and exact Rademacher moments live in
:mod:`littlewood_lab.khinchine`.
"""

from .bounds import (
    ConstantReport,
    beta_m,
    growth_classification,
    lower_bound,
    upper_bound_mixed,
    verify_table,
    verify_theorem_alpha,
    verify_theorem_kjh,
)
from .extremal import analytic_norm_upper, construct_extremal, expected_dims
from .khinchine import (
    gamma,
    haagerup_A,
    moment_comparison_constant,
    multiple_rademacher_moment,
    rademacher_moment,
    solve_p0,
    verify_khinchine,
    verify_multiple_khinchine,
)
from .nested import ExponentTuple, is_admissible, mixed_l1_l2, nested_norm, ratio
from .norms import (
    BudgetExceededError,
    InvalidBoundError,
    NormResult,
    alternating_ascent,
    certified_norm,
    exact_sup_norm,
    linear_resolve,
    sup_norm,
)
from .tensor import (
    CoefficientTensor,
    SignAssignment,
    TensorError,
    axis_slice,
    coefficient,
    deserialize,
    evaluate,
    new_tensor,
    serialize,
)

__version__ = "0.1.0"
