"""Delayed Mittag-Leffler matrix functions and fractional delay solvers.

Thin Python surface over the C++ core: matrices travel as nested lists of
floats, problems as JSON run-configuration strings (same schema as the CLI).
"""

from fdde._core import (
    canonical_config,
    delayed_ml,
    eval_x,
    gamma,
    mat_exp,
    ml_matrix,
    oracle_solve,
    qtable_cells,
    solve,
    verify,
)

__all__ = [
    "canonical_config",
    "delayed_ml",
    "eval_x",
    "gamma",
    "mat_exp",
    "ml_matrix",
    "oracle_solve",
    "qtable_cells",
    "solve",
    "verify",
]
