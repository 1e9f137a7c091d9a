"""Pure-numpy kernels, used when the compiled extension is unavailable.

Must stay semantically identical to _native.pyx (tests assert parity).
"""

from __future__ import annotations

import numpy as np


def ks_statistic(x: np.ndarray, y: np.ndarray) -> float:
    """Sup distance between the empirical CDFs of two sorted samples."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.size == 0 or y.size == 0:
        raise ValueError("ks_statistic requires nonempty samples")
    grid = np.concatenate([x, y])
    fx = np.searchsorted(x, grid, side="right") / x.size
    fy = np.searchsorted(y, grid, side="right") / y.size
    return float(np.abs(fx - fy).max())


def match_any_row(rows: np.ndarray, pool: np.ndarray,
                  tol: np.ndarray) -> np.ndarray:
    """Boolean mask: rows[i] matches some pool row within per-column tolerance."""
    rows = np.asarray(rows, dtype=np.float64)
    pool = np.asarray(pool, dtype=np.float64)
    tol = np.asarray(tol, dtype=np.float64)
    if pool.shape[1] != rows.shape[1] or tol.shape[0] != rows.shape[1]:
        raise ValueError("column count mismatch")
    out = np.zeros(rows.shape[0], dtype=bool)
    for i in range(rows.shape[0]):
        out[i] = bool(np.any(np.all(np.abs(pool - rows[i]) <= tol, axis=1)))
    return out
