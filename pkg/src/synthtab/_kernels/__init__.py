"""Hot-kernel dispatch: compiled extension when built, numpy fallback otherwise.

``BACKEND`` reports which implementation is active ("native" or "python").
Both expose the same two functions with identical semantics:

- ks_statistic(x_sorted, y_sorted): sup |F_x - F_y| over empirical CDFs
- match_any_row(rows, pool, tol): per-row tolerance match against a pool
"""

try:
    from ._native import ks_statistic, match_any_row

    BACKEND = "native"
except ImportError:  # extension not built; pure-Python install
    from ._fallback import ks_statistic, match_any_row

    BACKEND = "python"

__all__ = ["ks_statistic", "match_any_row", "BACKEND"]
