import numpy as np
import pytest

from synthtab import (
    ColumnSchema,
    TableSchema,
    evaluate_datasets,
    local_sample,
    nearest_pd,
    profile,
)
from synthtab.errors import InvalidProfile
from synthtab.metrics import (
    BOUNDARY_ADHERENCE,
    CATEGORY_ADHERENCE,
    CORRELATION_SIMILARITY,
    STATISTIC_SIMILARITY,
)
from synthtab.profiling import ColumnStats, CorrelationEntry, DatasetProfile


def two_col_profile(r=0.0, mean=0.0, sd=1.0, lo=-50.0, hi=50.0):
    stats = tuple(
        ColumnStats(name, "continuous", 100, mean, sd, lo, hi, (mean, mean))
        for name in ("a", "b")
    )
    corr = (CorrelationEntry("a", "b", r),)
    return DatasetProfile(stats, corr, 100)


TWO_COL_SCHEMA = TableSchema((ColumnSchema("a"), ColumnSchema("b")))


class TestNearestPd:
    def test_identity_fixed_point(self):
        eye = np.eye(4)
        out = nearest_pd(eye)
        assert np.array_equal(out, eye)

    def test_already_pd_unchanged(self):
        m = np.array([[1.0, 0.999], [0.999, 1.0]])
        assert np.array_equal(nearest_pd(m), m)

    def test_inconsistent_matrix_repaired(self):
        m = np.array([
            [1.0, 0.9, 0.9],
            [0.9, 1.0, -0.9],
            [0.9, -0.9, 1.0],
        ])
        assert np.linalg.eigvalsh(m)[0] < 0  # genuinely broken
        out = nearest_pd(m)
        w = np.linalg.eigvalsh(out)
        assert w[0] >= 1e-6
        assert np.allclose(np.diag(out), 1.0, atol=1e-10)
        assert np.allclose(out, out.T)

    def test_random_fuzz(self):
        rng = np.random.default_rng(99)
        for _ in range(100):
            k = int(rng.integers(2, 9))
            base = rng.uniform(-1, 1, (k, k))
            m = (base + base.T) / 2
            np.fill_diagonal(m, 1.0)
            out = nearest_pd(m)
            assert np.linalg.eigvalsh(out)[0] >= 1e-6
            assert np.max(np.abs(np.diag(out) - 1.0)) <= 1e-10

    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError):
            nearest_pd(np.array([[1.0, 0.5], [0.2, 1.0]]))

    def test_rejects_bad_diagonal(self):
        with pytest.raises(ValueError):
            nearest_pd(np.array([[2.0, 0.0], [0.0, 1.0]]))


class TestLocalSample:
    def test_deterministic(self, iris_profile, iris_schema):
        a = local_sample(iris_profile, iris_schema, 500, seed=3)
        b = local_sample(iris_profile, iris_schema, 500, seed=3)
        assert np.array_equal(a.values, b.values)

    def test_seed_changes_output(self, iris_profile, iris_schema):
        a = local_sample(iris_profile, iris_schema, 50, seed=3)
        b = local_sample(iris_profile, iris_schema, 50, seed=4)
        assert not np.array_equal(a.values, b.values)

    def test_single_row_within_bounds(self, iris_profile, iris_schema):
        ds = local_sample(iris_profile, iris_schema, 1, seed=0)
        assert ds.n_rows == 1
        for s in iris_profile.stats:
            v = ds.column(s.name)[0]
            assert s.min <= v <= s.max

    def test_all_rows_within_bounds(self, iris_profile, iris_schema):
        ds = local_sample(iris_profile, iris_schema, 2000, seed=5)
        for s in iris_profile.stats:
            col = ds.column(s.name)
            assert col.min() >= s.min and col.max() <= s.max

    def test_identity_correlation_near_zero(self):
        prof = two_col_profile(r=0.0)
        ds = local_sample(prof, TWO_COL_SCHEMA, 10_000, seed=42)
        r = np.corrcoef(ds.values[:, 0], ds.values[:, 1])[0, 1]
        assert abs(r) < 0.05

    def test_strong_correlation_reproduced(self):
        prof = two_col_profile(r=0.85)
        ds = local_sample(prof, TWO_COL_SCHEMA, 10_000, seed=42)
        r = np.corrcoef(ds.values[:, 0], ds.values[:, 1])[0, 1]
        assert abs(r - 0.85) < 0.03

    def test_mean_error_shrinks_with_n(self):
        prof = two_col_profile(r=0.3, mean=10.0, sd=2.0, lo=0.0, hi=20.0)
        errors = {n: [] for n in (100, 10_000)}
        for n in errors:
            for seed in range(5):
                ds = local_sample(prof, TWO_COL_SCHEMA, n, seed=seed)
                errors[n].append(
                    float(np.mean(np.abs(ds.values.mean(axis=0) - 10.0)))
                )
        assert np.median(errors[10_000]) < np.median(errors[100])

    def test_ordinal_snapped_to_levels(self, real_estate, real_estate_schema):
        prof = profile(real_estate)
        ds = local_sample(prof, real_estate_schema, 500, seed=8)
        col = ds.column("convenience_stores")
        assert set(col) <= set(range(11))

    def test_metric_suite_as_oracle(self, iris, iris_profile, iris_schema):
        ds = local_sample(iris_profile, iris_schema, 1000, seed=40)
        report = evaluate_datasets(iris, ds)
        assert report.aggregates[STATISTIC_SIMILARITY][0] >= 0.98
        assert report.aggregates[BOUNDARY_ADHERENCE][0] == 1.0
        assert report.aggregates[CORRELATION_SIMILARITY][0] >= 0.95

    def test_category_adherence_by_construction(self, real_estate,
                                                real_estate_schema):
        prof = profile(real_estate)
        ds = local_sample(prof, real_estate_schema, 300, seed=2)
        report = evaluate_datasets(real_estate, ds)
        assert report.aggregates[CATEGORY_ADHERENCE][0] == 1.0

    def test_rejects_schema_mismatch(self, iris_profile):
        with pytest.raises(InvalidProfile):
            local_sample(iris_profile, TWO_COL_SCHEMA, 10, seed=0)

    def test_rejects_bad_n(self, iris_profile, iris_schema):
        with pytest.raises(ValueError):
            local_sample(iris_profile, iris_schema, 0, seed=0)

    def test_constant_column_stays_constant(self, tiny_mixed):
        prof = profile(tiny_mixed)
        ds = local_sample(prof, tiny_mixed.schema, 50, seed=1)
        assert np.all(ds.column("batch") == 7.0)
