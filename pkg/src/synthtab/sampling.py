"""Offline statistics-conditioned sampler.

Draws correlated Gaussian rows matching a profile's means, standard
deviations and correlation matrix (repaired to positive definite when
needed), truncates to the observed ranges by bounded per-row resampling,
and snaps ordinal columns to their nearest allowed level. Fully
deterministic for a fixed seed.
"""

from __future__ import annotations

import numpy as np

from .data import Dataset, TableSchema
from .errors import InvalidProfile, NotRepairable
from .profiling import DatasetProfile

MAX_RESAMPLE_ATTEMPTS = 100


def nearest_pd(corr: np.ndarray, eps: float = 1e-6,
               max_iter: int = 100) -> np.ndarray:
    """Nearest positive-definite correlation matrix by eigenvalue clipping.

    Already-PD inputs (smallest eigenvalue >= eps) are returned unchanged.
    Otherwise eigenvalues are clipped from below and the matrix rescaled to
    unit diagonal, with an escalating clip floor until the smallest
    eigenvalue reaches eps.
    """
    a = np.asarray(corr, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("correlation matrix must be square")
    if not np.all(np.isfinite(a)):
        raise ValueError("correlation matrix must be finite")
    if not np.allclose(a, a.T, atol=1e-12):
        raise ValueError("correlation matrix must be symmetric")
    if not np.allclose(np.diag(a), 1.0, atol=1e-12):
        raise ValueError("correlation matrix must have unit diagonal")

    floor = eps
    for _ in range(max_iter):
        w, v = np.linalg.eigh(a)
        if w[0] >= eps:
            return a
        clipped = np.maximum(w, floor)
        b = (v * clipped) @ v.T
        d = np.sqrt(np.diag(b))
        a = b / np.outer(d, d)
        a = (a + a.T) / 2
        np.fill_diagonal(a, 1.0)
        floor *= 2
    raise NotRepairable(
        f"matrix not positive definite after {max_iter} repair iterations"
    )


def _sampling_correlation(profile: DatasetProfile) -> np.ndarray:
    """Correlation matrix for sampling: excluded pairs are treated as 0."""
    mat = profile.correlation_matrix()
    mat = np.where(np.isnan(mat), 0.0, mat)
    np.fill_diagonal(mat, 1.0)
    return mat


def _snap_to_levels(x: np.ndarray, levels: np.ndarray) -> np.ndarray:
    # nearest level; ties resolve to the lower level
    dist = np.abs(x[:, None] - levels[None, :])
    return levels[np.argmin(dist, axis=1)]


def local_sample(profile: DatasetProfile, schema: TableSchema, n: int,
                 seed: int) -> Dataset:
    """Draw ``n`` rows honoring the profile's statistics. Deterministic per seed."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if profile.names != schema.names:
        raise InvalidProfile(
            f"profile columns {profile.names} do not match schema {schema.names}"
        )
    means = np.array([s.mean for s in profile.stats])
    sds = np.array([s.sd for s in profile.stats])
    lo = np.array([s.min for s in profile.stats])
    hi = np.array([s.max for s in profile.stats])
    if not (np.all(np.isfinite(means)) and np.all(np.isfinite(sds))
            and np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
        raise InvalidProfile("profile statistics must be finite")
    if np.any(sds < 0) or np.any(lo > hi):
        raise InvalidProfile("profile statistics are inconsistent")

    corr = nearest_pd(_sampling_correlation(profile))
    chol = np.linalg.cholesky(corr)

    rng = np.random.default_rng(seed)
    k = len(schema)

    def draw(count: int) -> np.ndarray:
        z = rng.standard_normal((count, k))
        return means + sds * (z @ chol.T)

    x = draw(n)
    for _ in range(MAX_RESAMPLE_ATTEMPTS - 1):
        bad = np.any((x < lo) | (x > hi), axis=1)
        if not bad.any():
            break
        x[bad] = draw(int(bad.sum()))
    x = np.clip(x, lo, hi)

    for j, col in enumerate(schema.columns):
        if col.is_ordinal:
            x[:, j] = _snap_to_levels(x[:, j], np.asarray(col.levels))
    return Dataset.from_rows(schema, x)
