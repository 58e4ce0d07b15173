"""Correct-solvability criteria and the explicit solution operator for
-r(x) y'(x) + q(x) y(x) = f(x) with y vanishing at +-infinity.

Thin wrapper over the C++ core; see the project README for the full CLI.
"""

from _solvq import (  # noqa: F401
    A_at,
    CoefficientPair,
    M_1_at,
    M_p_at,
    apply_G,
    classify,
    classify_example8,
    d_of_x,
    make_constant,
    make_exp_osc,
    make_expr,
    make_sine_power,
    norm_bracket,
    s1_s2_diverge,
    scale_pair,
    scan_d,
    solve_on_grid,
    __version__,
)

__all__ = [
    "A_at",
    "CoefficientPair",
    "M_1_at",
    "M_p_at",
    "apply_G",
    "classify",
    "classify_example8",
    "d_of_x",
    "make_constant",
    "make_exp_osc",
    "make_expr",
    "make_sine_power",
    "norm_bracket",
    "s1_s2_diverge",
    "scale_pair",
    "scan_d",
    "solve_on_grid",
    "__version__",
]
