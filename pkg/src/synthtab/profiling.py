"""Statistical profiling: per-column summaries and the full correlation matrix.

The profile is the information payload for prompt construction, the local
sampler, and several evaluation metrics. It serializes to JSON with stable
key order so downstream steps can run from a saved profile without raw data.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path
from typing import Mapping

import numpy as np
from scipy import special

from .data import CONTINUOUS, Dataset
from .errors import LengthMismatch, TooFewRows, UnknownColumn, ZeroVariance


@dataclass(frozen=True)
class ColumnStats:
    """Univariate summary of one column.

    ``sd`` is the sample standard deviation (n-1 denominator). Ordinal
    columns additionally carry their observed levels and relative level
    frequencies, in level order.
    """

    name: str
    kind: str
    n: int
    mean: float
    sd: float
    min: float
    max: float
    ci95: tuple[float, float]
    levels: tuple[float, ...] | None = None
    level_freqs: tuple[float, ...] | None = None


@dataclass(frozen=True)
class CorrelationEntry:
    col_a: str
    col_b: str
    r: float


@dataclass(frozen=True)
class DatasetProfile:
    """Per-column stats plus Pearson r for every valid unordered column pair.

    ``corr`` holds one entry per unordered pair (i < j in column order); the
    diagonal is implicitly 1. Pairs involving a zero-variance column are
    excluded and noted in ``warnings``.
    """

    stats: tuple[ColumnStats, ...]
    corr: tuple[CorrelationEntry, ...]
    n_rows: int
    warnings: tuple[str, ...] = ()

    @property
    def names(self) -> list[str]:
        return [s.name for s in self.stats]

    def column(self, name: str) -> ColumnStats:
        for s in self.stats:
            if s.name == name:
                return s
        raise UnknownColumn(f"no column named {name!r} in profile")

    def r(self, a: str, b: str) -> float:
        if a == b:
            return 1.0
        for e in self.corr:
            if {e.col_a, e.col_b} == {a, b}:
                return e.r
        raise UnknownColumn(f"no correlation entry for pair ({a!r}, {b!r})")

    def correlation_matrix(self) -> np.ndarray:
        """Full symmetric matrix in column order; excluded pairs are NaN."""
        names = self.names
        k = len(names)
        mat = np.full((k, k), np.nan)
        np.fill_diagonal(mat, 1.0)
        idx = {n: i for i, n in enumerate(names)}
        for e in self.corr:
            i, j = idx[e.col_a], idx[e.col_b]
            mat[i, j] = mat[j, i] = e.r
        return mat


def pearson(x, y) -> float:
    """Pearson product-moment correlation coefficient."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise LengthMismatch(f"vectors of shape {x.shape} vs {y.shape}")
    if x.size < 2:
        raise TooFewRows("pearson requires at least 2 observations")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(np.dot(dx, dx))
    syy = float(np.dot(dy, dy))
    if not (math.isfinite(sxx) and math.isfinite(syy)):
        # huge magnitudes overflowed the sums; normalize and recompute
        dx = dx / np.abs(dx).max()
        dy = dy / np.abs(dy).max()
        sxx = float(np.dot(dx, dx))
        syy = float(np.dot(dy, dy))
    if sxx == 0.0:
        raise ZeroVariance("x")
    if syy == 0.0:
        raise ZeroVariance("y")
    # sqrt(v*v) == v exactly for doubles, so r(x, x) is exactly 1
    den = sxx * syy
    if den > 0.0 and math.isfinite(den):
        den = math.sqrt(den)
    else:  # product under- or overflowed; factor the square roots
        den = math.sqrt(sxx) * math.sqrt(syy)
    r = float(np.dot(dx, dy)) / den
    return min(1.0, max(-1.0, r))


def t_quantile(p: float, df: int) -> float:
    """Student-t quantile, refined to machine accuracy by Newton steps."""
    t = float(special.stdtrit(df, p))
    log_c = special.gammaln((df + 1) / 2) - special.gammaln(df / 2)
    c = math.exp(log_c) / math.sqrt(df * math.pi)
    for _ in range(3):
        pdf = c * (1 + t * t / df) ** (-(df + 1) / 2)
        t -= (float(special.stdtr(df, t)) - p) / pdf
    return t


def confidence_interval(col, level: float = 0.95) -> tuple[float, float]:
    """Two-sided t-based confidence interval for the column mean."""
    x = np.asarray(col, dtype=np.float64)
    if x.size < 2:
        raise TooFewRows("confidence interval requires at least 2 observations")
    n = x.size
    mean = float(x.mean())
    sd = float(x.std(ddof=1))
    half = t_quantile(0.5 + level / 2, n - 1) * sd / math.sqrt(n)
    return (mean - half, mean + half)


def profile(ds: Dataset) -> DatasetProfile:
    """Compute the full statistical profile of a dataset."""
    if ds.n_rows < 2:
        raise TooFewRows(f"profiling requires at least 2 rows, got {ds.n_rows}")
    stats = []
    warnings: list[str] = []
    degenerate: set[str] = set()
    for j, col in enumerate(ds.schema.columns):
        x = ds.values[:, j]
        sd = float(x.std(ddof=1))
        if sd == 0.0:
            degenerate.add(col.name)
            warnings.append(f"column {col.name!r} has zero variance; "
                            "correlations involving it are excluded")
        levels = level_freqs = None
        if col.is_ordinal:
            levels = col.levels
            counts = [(x == lv).sum() for lv in col.levels]
            level_freqs = tuple(float(c) / ds.n_rows for c in counts)
        stats.append(
            ColumnStats(
                name=col.name,
                kind=col.kind,
                n=ds.n_rows,
                mean=float(x.mean()),
                sd=sd,
                min=float(x.min()),
                max=float(x.max()),
                ci95=confidence_interval(x),
                levels=levels,
                level_freqs=level_freqs,
            )
        )
    corr = []
    names = ds.schema.names
    for i in range(len(names)):
        for j in range(i + 1, len(names)):
            if names[i] in degenerate or names[j] in degenerate:
                continue
            r = pearson(ds.values[:, i], ds.values[:, j])
            corr.append(CorrelationEntry(names[i], names[j], r))
    return DatasetProfile(tuple(stats), tuple(corr), ds.n_rows, tuple(warnings))


def significant_pairs(p: DatasetProfile, threshold: float = 0.20,
                      include_all: bool = False) -> list[CorrelationEntry]:
    """Pairs with |r| >= threshold, in column order; include_all keeps every pair."""
    if include_all:
        return list(p.corr)
    return [e for e in p.corr if abs(e.r) >= threshold]


def round_half_away(x: float, decimals: int = 3) -> float:
    """Round half away from zero, working on the shortest decimal repr."""
    q = Decimal(repr(float(x))).quantize(
        Decimal(1).scaleb(-decimals), rounding=ROUND_HALF_UP
    )
    v = float(q)
    return v if v != 0.0 else 0.0  # normalize -0.0


def round_profile(p: DatasetProfile, decimals: int = 3) -> DatasetProfile:
    """Round every numeric field half away from zero. Idempotent."""

    def r(x):
        return round_half_away(x, decimals)

    stats = tuple(
        replace(
            s,
            mean=r(s.mean),
            sd=r(s.sd),
            min=r(s.min),
            max=r(s.max),
            ci95=(r(s.ci95[0]), r(s.ci95[1])),
            levels=tuple(r(v) for v in s.levels) if s.levels is not None else None,
            level_freqs=(
                tuple(r(v) for v in s.level_freqs)
                if s.level_freqs is not None
                else None
            ),
        )
        for s in p.stats
    )
    corr = tuple(replace(e, r=r(e.r)) for e in p.corr)
    return DatasetProfile(stats, corr, p.n_rows, p.warnings)


def profile_to_dict(p: DatasetProfile) -> dict:
    cols = []
    for s in p.stats:
        d: dict = {
            "name": s.name,
            "kind": s.kind,
            "n": s.n,
            "mean": s.mean,
            "sd": s.sd,
            "min": s.min,
            "max": s.max,
            "ci95": [s.ci95[0], s.ci95[1]],
        }
        if s.levels is not None:
            d["levels"] = list(s.levels)
            d["level_freqs"] = list(s.level_freqs)
        cols.append(d)
    return {
        "format": "synthtab-profile/1",
        "n_rows": p.n_rows,
        "columns": cols,
        "correlations": [
            {"a": e.col_a, "b": e.col_b, "r": e.r} for e in p.corr
        ],
        "warnings": list(p.warnings),
    }


def profile_from_dict(data: Mapping) -> DatasetProfile:
    stats = tuple(
        ColumnStats(
            name=c["name"],
            kind=c.get("kind", CONTINUOUS),
            n=int(c["n"]),
            mean=c["mean"],
            sd=c["sd"],
            min=c["min"],
            max=c["max"],
            ci95=(c["ci95"][0], c["ci95"][1]),
            levels=tuple(c["levels"]) if "levels" in c else None,
            level_freqs=tuple(c["level_freqs"]) if "level_freqs" in c else None,
        )
        for c in data["columns"]
    )
    corr = tuple(
        CorrelationEntry(e["a"], e["b"], e["r"]) for e in data["correlations"]
    )
    return DatasetProfile(
        stats, corr, int(data["n_rows"]), tuple(data.get("warnings", ()))
    )


def save_profile(p: DatasetProfile, path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        json.dump(profile_to_dict(p), fh, indent=2)
        fh.write("\n")


def load_profile(path: str | Path) -> DatasetProfile:
    with Path(path).open(encoding="utf-8") as fh:
        return profile_from_dict(json.load(fh))
