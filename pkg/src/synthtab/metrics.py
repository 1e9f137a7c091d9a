"""Fidelity and privacy metrics for synthetic tables.

Every fidelity metric returns a normalized score in [0, 1]; the confidence
interval overlap is a percentage in [0, 100]. The real dataset always
defines the reference frame (ranges, observed levels, interval lengths).
Degenerate inputs (zero variance, zero range) take the documented branches
rather than producing NaN.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .data import Dataset, TableSchema
from .errors import EmptyDataset, SchemaMismatch, TooFewRows, ZeroVariance
from .profiling import confidence_interval, pearson

STATISTIC_SIMILARITY = "StatisticSimilarity"
RANGE_COVERAGE = "RangeCoverage"
BOUNDARY_ADHERENCE = "BoundaryAdherence"
KS_COMPLEMENT = "KSComplement"
CATEGORY_COVERAGE = "CategoryCoverage"
CATEGORY_ADHERENCE = "CategoryAdherence"
TV_COMPLEMENT = "TVComplement"
CORRELATION_SIMILARITY = "CorrelationSimilarity"
CI_OVERLAP = "CIOverlap95"
NEW_ROW_SYNTHESIS = "NewRowSynthesis"

DISPLAY_NAMES = {CI_OVERLAP: "95% CI Overlap"}

CONTINUOUS_METRICS = (STATISTIC_SIMILARITY, RANGE_COVERAGE,
                      BOUNDARY_ADHERENCE, KS_COMPLEMENT)
ORDINAL_METRICS = (CATEGORY_COVERAGE, CATEGORY_ADHERENCE, TV_COMPLEMENT)


def display_name(metric: str) -> str:
    return DISPLAY_NAMES.get(metric, metric)


def _as_column(x, name: str) -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64).ravel()
    if arr.size == 0:
        raise EmptyDataset(f"{name} column is empty")
    return arr


def statistic_similarity(real_col, synth_col) -> float:
    """1 - |mean difference| / real range, clipped to [0, 1]."""
    r = _as_column(real_col, "real")
    s = _as_column(synth_col, "synthetic")
    span = float(r.max() - r.min())
    if span == 0.0:
        return 1.0 if float(s.mean()) == float(r.mean()) else 0.0
    value = 1.0 - abs(float(s.mean()) - float(r.mean())) / span
    return min(1.0, max(0.0, value))


def range_coverage(real_col, synth_col) -> float:
    """How much of the real [min, max] span the synthetic data covers."""
    r = _as_column(real_col, "real")
    s = _as_column(synth_col, "synthetic")
    rmin, rmax = float(r.min()), float(r.max())
    span = rmax - rmin
    if span == 0.0:
        return 1.0 if bool(np.any(s == rmin)) else 0.0
    shortfall = (max(0.0, (float(s.min()) - rmin) / span)
                 + max(0.0, (rmax - float(s.max())) / span))
    return max(0.0, 1.0 - shortfall)


def boundary_adherence(real_col, synth_col) -> float:
    """Fraction of synthetic values inside the real [min, max], inclusive."""
    r = _as_column(real_col, "real")
    s = _as_column(synth_col, "synthetic")
    inside = (s >= r.min()) & (s <= r.max())
    return float(inside.sum()) / s.size


def ks_complement(real_col, synth_col) -> float:
    """1 - sup |F_real - F_synth| over the empirical CDFs."""
    r = _as_column(real_col, "real")
    s = _as_column(synth_col, "synthetic")
    return 1.0 - _kernels.ks_statistic(np.sort(r), np.sort(s))


def category_coverage(real_col, synth_col) -> float:
    """Share of levels observed in real data that also occur in synthetic."""
    r = _as_column(real_col, "real")
    s = _as_column(synth_col, "synthetic")
    real_levels = np.unique(r)
    hit = np.isin(real_levels, np.unique(s))
    return float(hit.sum()) / real_levels.size


def category_adherence(real_col, synth_col) -> float:
    """Fraction of synthetic values whose level occurs in the real data."""
    r = _as_column(real_col, "real")
    s = _as_column(synth_col, "synthetic")
    return float(np.isin(s, np.unique(r)).sum()) / s.size


def tv_complement(real_col, synth_col) -> float:
    """1 - total variation distance between level frequency tables."""
    r = _as_column(real_col, "real")
    s = _as_column(synth_col, "synthetic")
    union = np.unique(np.concatenate([r, s]))
    pr = np.array([(r == v).sum() for v in union], dtype=np.float64) / r.size
    ps = np.array([(s == v).sum() for v in union], dtype=np.float64) / s.size
    value = 1.0 - 0.5 * float(np.abs(pr - ps).sum())
    return min(1.0, max(0.0, value))  # the L1 sum can round above 2


def correlation_similarity_from_r(r_real: float, r_synth: float) -> float:
    """1 - |r_real - r_synth| / 2."""
    return 1.0 - abs(r_real - r_synth) / 2.0


def correlation_similarity(real: Dataset, synth: Dataset,
                           pair: tuple[str, str]) -> float:
    """Correlation preservation for one column pair.

    Raises ZeroVariance when either column is constant in either dataset;
    the evaluation pipeline excludes such pairs with a warning.
    """
    _check_pair(real, synth)
    a, b = pair
    r_real = pearson(real.column(a), real.column(b))
    r_synth = pearson(synth.column(a), synth.column(b))
    return correlation_similarity_from_r(r_real, r_synth)


def interval_overlap_percent(real_ci: tuple[float, float],
                             synth_ci: tuple[float, float]) -> float:
    """Percent of the real interval covered by the synthetic interval."""
    r_lo, r_hi = real_ci
    s_lo, s_hi = synth_ci
    length = r_hi - r_lo
    if length == 0.0:
        return 100.0 if s_lo <= r_lo <= s_hi else 0.0
    overlap = min(r_hi, s_hi) - max(r_lo, s_lo)
    return min(100.0, max(0.0, 100.0 * overlap / length))


def ci_overlap_percent(real_col, synth_col, level: float = 0.95) -> float:
    """Overlap of the t-based mean confidence intervals, in percent."""
    r = _as_column(real_col, "real")
    s = _as_column(synth_col, "synthetic")
    return interval_overlap_percent(confidence_interval(r, level),
                                    confidence_interval(s, level))


def _match_tolerances(reference: Dataset, tol_rel: float) -> np.ndarray:
    """Per-column absolute tolerances for row matching.

    Continuous columns: tol_rel times the reference column range. Ordinal
    columns: exact equality (tolerance 0).
    """
    tol = np.zeros(len(reference.schema))
    for j, col in enumerate(reference.schema.columns):
        if not col.is_ordinal:
            x = reference.values[:, j]
            tol[j] = tol_rel * float(x.max() - x.min())
    return tol


def new_row_synthesis(real: Dataset, synth: Dataset,
                      tol_rel: float = 0.01) -> float:
    """Fraction of synthetic rows that match no real row."""
    if tol_rel < 0:
        raise ValueError("tol_rel must be >= 0")
    _check_pair(real, synth)
    tol = _match_tolerances(real, tol_rel)
    matched = _kernels.match_any_row(
        np.ascontiguousarray(synth.values), np.ascontiguousarray(real.values), tol
    )
    return 1.0 - float(matched.sum()) / synth.n_rows


def row_overlap(synth_a: Dataset, synth_b: Dataset,
                tol_rel: float = 0.01) -> float:
    """Fraction of rows of synth_a that match some row of synth_b.

    Uses the new_row_synthesis match rule with tolerances scaled by the
    column ranges of synth_b (the dataset matched against).
    """
    if tol_rel < 0:
        raise ValueError("tol_rel must be >= 0")
    _check_pair(synth_a, synth_b)
    tol = _match_tolerances(synth_b, tol_rel)
    matched = _kernels.match_any_row(
        np.ascontiguousarray(synth_a.values),
        np.ascontiguousarray(synth_b.values), tol
    )
    return float(matched.sum()) / synth_a.n_rows


def violation_audit(ds: Dataset, schema: TableSchema) -> dict[str, int]:
    """Per-column count of cells violating hard bounds or ordinal levels."""
    counts: dict[str, int] = {}
    for col in schema.columns:
        x = ds.column(col.name)
        bad = np.zeros(x.size, dtype=bool)
        if col.hard_min is not None:
            bad |= x < col.hard_min
        if col.hard_max is not None:
            bad |= x > col.hard_max
        if col.is_ordinal:
            bad |= ~np.isin(x, np.asarray(col.levels))
        counts[col.name] = int(bad.sum())
    return counts


def aggregate(values) -> tuple[float, float]:
    """Mean and sample SD of a list of scores; SD is 0 for a single score."""
    vals = [float(v) for v in values]
    if not vals:
        raise ValueError("nothing to aggregate")
    mean = math.fsum(vals) / len(vals)
    if len(vals) == 1:
        return mean, 0.0
    var = math.fsum((v - mean) ** 2 for v in vals) / (len(vals) - 1)
    return mean, math.sqrt(var)


def _check_pair(real: Dataset, synth: Dataset) -> None:
    if real.schema != synth.schema:
        raise SchemaMismatch(
            "real and synthetic datasets must share one schema"
        )
    if real.n_rows == 0:
        raise EmptyDataset("real dataset is empty")
    if synth.n_rows == 0:
        raise EmptyDataset("synthetic dataset is empty")


@dataclass(frozen=True)
class MetricScore:
    """One metric evaluated on one target (column, pair, or whole table)."""

    metric: str
    target: str | tuple[str, str] | None
    value: float
    warnings: tuple[str, ...] = ()

    def __post_init__(self):
        if math.isnan(self.value):
            raise ValueError(f"{self.metric} produced NaN for {self.target}")
        hi = 100.0 if self.metric == CI_OVERLAP else 1.0
        if not 0.0 <= self.value <= hi:
            raise ValueError(
                f"{self.metric}={self.value} outside [0, {hi}] for {self.target}"
            )


@dataclass(frozen=True)
class MetricReport:
    """Everything cmd_evaluate emits: per-target scores plus aggregates."""

    real_name: str
    synth_name: str
    n_real: int
    n_synth: int
    tol_rel: float
    scores: tuple[MetricScore, ...]
    aggregates: dict[str, tuple[float, float, int]]  # metric -> (mean, sd, count)
    violations: dict[str, int]
    warnings: tuple[str, ...] = ()

    @property
    def amplified(self) -> bool:
        return self.n_real != self.n_synth

    def scores_for(self, metric: str) -> list[MetricScore]:
        return [s for s in self.scores if s.metric == metric]

    def to_dict(self) -> dict:
        return {
            "format": "synthtab-report/1",
            "real": {"name": self.real_name, "n_rows": self.n_real},
            "synthetic": {"name": self.synth_name, "n_rows": self.n_synth},
            "amplified": self.amplified,
            "tol_rel": self.tol_rel,
            "scores": [
                {
                    "metric": s.metric,
                    "target": list(s.target) if isinstance(s.target, tuple)
                    else s.target,
                    "value": s.value,
                    "warnings": list(s.warnings),
                }
                for s in self.scores
            ],
            "aggregates": {
                m: {"mean": a[0], "sd": a[1], "count": a[2]}
                for m, a in self.aggregates.items()
            },
            "violations": dict(self.violations),
            "warnings": list(self.warnings),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "MetricReport":
        scores = tuple(
            MetricScore(
                metric=s["metric"],
                target=tuple(s["target"]) if isinstance(s["target"], list)
                else s["target"],
                value=s["value"],
                warnings=tuple(s.get("warnings", ())),
            )
            for s in data["scores"]
        )
        aggregates = {
            m: (a["mean"], a["sd"], a["count"])
            for m, a in data["aggregates"].items()
        }
        return cls(
            real_name=data["real"]["name"],
            synth_name=data["synthetic"]["name"],
            n_real=data["real"]["n_rows"],
            n_synth=data["synthetic"]["n_rows"],
            tol_rel=data["tol_rel"],
            scores=scores,
            aggregates=aggregates,
            violations=dict(data["violations"]),
            warnings=tuple(data.get("warnings", ())),
        )


_COLUMN_METRICS = {
    STATISTIC_SIMILARITY: statistic_similarity,
    RANGE_COVERAGE: range_coverage,
    BOUNDARY_ADHERENCE: boundary_adherence,
    KS_COMPLEMENT: ks_complement,
    CATEGORY_COVERAGE: category_coverage,
    CATEGORY_ADHERENCE: category_adherence,
    TV_COMPLEMENT: tv_complement,
}


def evaluate_datasets(real: Dataset, synth: Dataset, *,
                      tol_rel: float = 0.01,
                      real_name: str = "real",
                      synth_name: str = "synthetic") -> MetricReport:
    """Run the full metric battery on a real/synthetic dataset pair.

    Continuous columns get the continuous metrics plus CI overlap; ordinal
    columns get the category metrics; every valid column pair contributes a
    CorrelationSimilarity score; NewRowSynthesis is table-level. Aggregates
    are (mean, sample SD, count) over the per-target scores of each metric.
    """
    _check_pair(real, synth)
    scores: list[MetricScore] = []
    warnings: list[str] = []

    for col in real.schema.columns:
        r = real.column(col.name)
        s = synth.column(col.name)
        metric_names = ORDINAL_METRICS if col.is_ordinal else CONTINUOUS_METRICS
        for metric in metric_names:
            value = _COLUMN_METRICS[metric](r, s)
            scores.append(MetricScore(metric, col.name, value))
        if not col.is_ordinal:
            try:
                scores.append(
                    MetricScore(CI_OVERLAP, col.name, ci_overlap_percent(r, s))
                )
            except TooFewRows:
                warnings.append(
                    f"CI overlap for {col.name!r} skipped: "
                    "needs at least 2 rows per dataset"
                )

    names = real.schema.names
    for i in range(len(names)):
        for j in range(i + 1, len(names)):
            pair = (names[i], names[j])
            try:
                value = correlation_similarity(real, synth, pair)
            except ZeroVariance:
                warnings.append(
                    f"correlation pair {pair} skipped: zero variance"
                )
                continue
            scores.append(MetricScore(CORRELATION_SIMILARITY, pair, value))

    scores.append(
        MetricScore(NEW_ROW_SYNTHESIS, None,
                    new_row_synthesis(real, synth, tol_rel))
    )

    aggregates: dict[str, tuple[float, float, int]] = {}
    for metric in (*CONTINUOUS_METRICS, *ORDINAL_METRICS,
                   CORRELATION_SIMILARITY, CI_OVERLAP, NEW_ROW_SYNTHESIS):
        vals = [s.value for s in scores if s.metric == metric]
        if vals:
            mean, sd = aggregate(vals)
            aggregates[metric] = (mean, sd, len(vals))

    return MetricReport(
        real_name=real_name,
        synth_name=synth_name,
        n_real=real.n_rows,
        n_synth=synth.n_rows,
        tol_rel=tol_rel,
        scores=tuple(scores),
        aggregates=aggregates,
        violations=violation_audit(synth, real.schema),
        warnings=tuple(warnings),
    )
