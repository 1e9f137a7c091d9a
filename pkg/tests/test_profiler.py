import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from synthtab import (
    ColumnSchema,
    Dataset,
    TableSchema,
    confidence_interval,
    pearson,
    profile,
    round_profile,
    significant_pairs,
)
from synthtab.errors import LengthMismatch, TooFewRows, ZeroVariance
from synthtab.profiling import (
    CorrelationEntry,
    DatasetProfile,
    load_profile,
    profile_from_dict,
    profile_to_dict,
    round_half_away,
    save_profile,
)

# keep magnitudes out of the variance-underflow regime, where pearson
# legitimately reports ZeroVariance
finite_floats = st.floats(min_value=-1e6, max_value=1e6,
                          allow_nan=False, allow_infinity=False).filter(
    lambda v: v == 0.0 or abs(v) >= 1e-3)


class TestPearson:
    def test_identity(self):
        assert pearson([1.5, 2.0, 3.0, 4.25], [1.5, 2.0, 3.0, 4.25]) == 1.0

    def test_negation(self):
        assert pearson([1.5, 2.0, 3.0], [-1.5, -2.0, -3.0]) == -1.0

    def test_oracle_value(self):
        # frozen from the brute-force product-moment oracle
        r = pearson([1, 2, 3, 4], [2, 4, 6, 9])
        assert r == pytest.approx(0.9943767126843689, abs=1e-15)
        assert r == pytest.approx(oracles.pearson([1, 2, 3, 4], [2, 4, 6, 9]),
                                  abs=1e-13)

    def test_oracle_value_second(self):
        r = pearson([1, 2, 3, 4], [1, 2, 3, 5])
        assert r == pytest.approx(0.9827076298239908, abs=1e-15)

    def test_zero_variance(self):
        with pytest.raises(ZeroVariance):
            pearson([1, 1, 1], [1, 2, 3])

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            pearson([1, 2], [1, 2, 3])

    @given(st.lists(finite_floats, min_size=3, max_size=20, unique=True),
           st.integers(min_value=0, max_value=10 ** 6))
    @settings(max_examples=60, deadline=None)
    def test_symmetry_and_sign_flip(self, xs, seed):
        rng = np.random.default_rng(seed)
        ys = list(rng.permutation(xs))
        r = pearson(xs, ys)
        assert pearson(ys, xs) == pytest.approx(r, abs=1e-12)
        assert pearson(xs, [-y for y in ys]) == pytest.approx(-r, abs=1e-12)
        assert -1.0 <= r <= 1.0

    @given(st.lists(finite_floats, min_size=3, max_size=20, unique=True),
           st.floats(min_value=0.01, max_value=100, allow_nan=False))
    @settings(max_examples=60, deadline=None)
    def test_positive_scale_invariance(self, xs, scale):
        ys = xs[::-1]
        r = pearson(xs, ys)
        assert pearson([x * scale for x in xs], ys) \
            == pytest.approx(r, abs=1e-9)


class TestConfidenceInterval:
    def test_constant_column(self):
        assert confidence_interval([5, 5, 5, 5]) == (5.0, 5.0)

    def test_oracle_value(self):
        # frozen from mpmath t-CDF inversion at 50 digits
        lo, hi = confidence_interval([1, 2, 3, 4, 5])
        assert lo == pytest.approx(1.0367568385224424, abs=1e-13)
        assert hi == pytest.approx(4.963243161477558, abs=1e-13)

    def test_matches_oracle(self):
        data = [3.2, 4.5, 1.1, 9.7, 6.6, 2.2, 8.0]
        got = confidence_interval(data)
        want = oracles.confidence_interval(data)
        assert got[0] == pytest.approx(want[0], abs=1e-12)
        assert got[1] == pytest.approx(want[1], abs=1e-12)

    def test_too_few_rows(self):
        with pytest.raises(TooFewRows):
            confidence_interval([1.0])

    def test_width_shrinks_with_n(self):
        rng = np.random.default_rng(11)
        base = rng.normal(10, 2, 5000)
        small = base[:150]
        large = base[:1000]
        w = lambda ci: ci[1] - ci[0]
        assert w(confidence_interval(large)) < w(confidence_interval(small))


class TestProfile:
    def test_hand_arithmetic(self):
        schema = TableSchema((ColumnSchema("x"),))
        ds = Dataset.from_rows(schema, [[1], [2], [3]])
        s = profile(ds).stats[0]
        assert (s.mean, s.sd, s.min, s.max, s.n) == (2.0, 1.0, 1.0, 3.0, 3)

    def test_identical_columns_r_one(self):
        schema = TableSchema((ColumnSchema("a"), ColumnSchema("b")))
        ds = Dataset.from_rows(schema, [[1, 1], [2, 2], [4, 4]])
        assert profile(ds).r("a", "b") == 1.0

    def test_too_few_rows(self):
        schema = TableSchema((ColumnSchema("x"),))
        with pytest.raises(TooFewRows):
            profile(Dataset.from_rows(schema, [[1.0]]))

    def test_zero_variance_column_excluded(self, tiny_mixed):
        p = profile(tiny_mixed)
        assert any("batch" in w for w in p.warnings)
        assert all("batch" not in (e.col_a, e.col_b) for e in p.corr)
        mat = p.correlation_matrix()
        assert np.isnan(mat[0, 2]) and np.isnan(mat[2, 0])
        assert mat[2, 2] == 1.0

    def test_matrix_symmetric_unit_diagonal(self, iris_profile):
        mat = iris_profile.correlation_matrix()
        assert np.array_equal(mat, mat.T)
        assert np.all(np.diag(mat) == 1.0)
        assert np.all(np.abs(mat) <= 1.0)

    def test_ordinal_frequencies(self, real_estate):
        s = profile(real_estate).column("convenience_stores")
        assert s.levels == tuple(float(v) for v in range(11))
        assert math.fsum(s.level_freqs) == pytest.approx(1.0, abs=1e-12)

    def test_profile_pearson_cross_check(self, iris, iris_profile):
        want = oracles.pearson(list(iris.column("petal_length")),
                               list(iris.column("petal_width")))
        assert iris_profile.r("petal_length", "petal_width") \
            == pytest.approx(want, abs=1e-12)


class TestSignificantPairs:
    def _profile(self, rs):
        stats = ()
        corr = tuple(
            CorrelationEntry(f"c{i}", f"c{i + 1}", r) for i, r in enumerate(rs)
        )
        return DatasetProfile(stats, corr, 10)

    def test_all_below_threshold(self):
        assert significant_pairs(self._profile([0.1, -0.15, 0.199])) == []

    def test_include_all_override(self):
        p = self._profile([0.1, -0.15, 0.199])
        assert len(significant_pairs(p, include_all=True)) == 3

    def test_boundary_inclusive(self):
        p = self._profile([0.19, 0.20, 0.85])
        kept = significant_pairs(p)
        assert [e.r for e in kept] == [0.20, 0.85]

    def test_order_follows_columns(self, iris_profile):
        kept = significant_pairs(iris_profile, include_all=True)
        assert [(e.col_a, e.col_b) for e in kept] \
            == [(e.col_a, e.col_b) for e in iris_profile.corr]


class TestRounding:
    def test_half_away_from_zero(self):
        assert round_half_away(5.04349) == 5.043
        assert round_half_away(-0.1175) == -0.118
        assert round_half_away(0.0005) == 0.001
        assert round_half_away(-0.0005) == -0.001

    def test_no_negative_zero(self):
        assert str(round_half_away(-0.0001)) == "0.0"

    @given(st.floats(min_value=-1e4, max_value=1e4,
                     allow_nan=False, allow_infinity=False))
    @settings(max_examples=200, deadline=None)
    def test_idempotent(self, x):
        once = round_half_away(x)
        assert round_half_away(once) == once

    def test_round_profile_idempotent(self, iris_profile):
        once = round_profile(iris_profile)
        assert round_profile(once) == once

    def test_round_profile_rounds_everything(self, iris_profile):
        p = round_profile(iris_profile)
        for s in p.stats:
            for v in (s.mean, s.sd, s.min, s.max, *s.ci95):
                assert v == round_half_away(v)
        for e in p.corr:
            assert e.r == round_half_away(e.r)


class TestSerialization:
    def test_round_trip_in_memory(self, iris_profile):
        assert profile_from_dict(profile_to_dict(iris_profile)) == iris_profile

    def test_round_trip_file(self, iris_profile, tmp_path):
        path = tmp_path / "p.json"
        save_profile(iris_profile, path)
        assert load_profile(path) == iris_profile

    def test_stable_key_order(self, iris_profile, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        save_profile(iris_profile, a)
        save_profile(iris_profile, b)
        assert a.read_bytes() == b.read_bytes()
        keys = list(json.loads(a.read_text()))
        assert keys == ["format", "n_rows", "columns", "correlations",
                        "warnings"]
