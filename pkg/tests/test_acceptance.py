"""Acceptance suite: one test per release criterion, each printing a
single PASS line with its measured numbers (run with -s to see them).

Criterion 4 (reference-score reproduction) needs externally obtained
datasets; point SYNTHTAB_REFERENCE_DATA at a directory containing the
files named in tests/reference/expected_scores.json to enable it. When
that data is absent the remaining criteria constitute acceptance.
"""

import json
import os
import time
from pathlib import Path

import numpy as np
import pytest

from conftest import FIXTURES, GOLDEN, load_fixture
from test_metrics import assert_matches_oracles, random_pair
from synthtab import (
    boundary_adherence,
    build_prompt,
    correlation_similarity,
    derive_restrictions,
    evaluate_datasets,
    ks_complement,
    load_csv,
    load_schema,
    local_sample,
    nearest_pd,
    new_row_synthesis,
    obfuscate,
    profile,
    range_coverage,
    round_profile,
    tv_complement,
    violation_audit,
    write_csv,
)
from synthtab.metrics import (
    BOUNDARY_ADHERENCE,
    CATEGORY_ADHERENCE,
    CI_OVERLAP,
    CORRELATION_SIMILARITY,
    NEW_ROW_SYNTHESIS,
    STATISTIC_SIMILARITY,
    correlation_similarity_from_r,
)
from synthtab.prompting import GenerationSpec, amplify

REFERENCE = Path(__file__).parent / "reference"
FIXTURE_NAMES = ["iris", "fish", "real_estate", "tiny_mixed", "tiny_wide"]


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def test_criterion_1_identity_suite():
    datasets = [load_fixture(name)[0] for name in FIXTURE_NAMES]
    with Timer() as t:
        for ds in datasets:
            report = evaluate_datasets(ds, ds)
            for score in report.scores:
                if score.metric == NEW_ROW_SYNTHESIS:
                    assert score.value == 0.0
                elif score.metric == CI_OVERLAP:
                    assert score.value == 100.0
                else:
                    assert score.value == 1.0
    assert t.elapsed < 1.0, f"identity suite took {t.elapsed:.2f}s"
    print(f"\nACCEPTANCE 1 PASS: identity suite exact on "
          f"{len(datasets)} fixtures in {t.elapsed:.3f}s")


def test_criterion_2_oracle_equivalence():
    rng = np.random.default_rng(20240605)
    with Timer() as t:
        for _ in range(50):
            real, synth = random_pair(rng)
            assert real.n_rows <= 6 and synth.n_rows <= 6
            assert real.n_cols <= 4
            assert_matches_oracles(real, synth, tol=1e-12)
    assert t.elapsed < 10.0, f"oracle equivalence took {t.elapsed:.2f}s"
    print(f"\nACCEPTANCE 2 PASS: 50 randomized pairs matched brute-force "
          f"oracles within 1e-12 in {t.elapsed:.2f}s")


def test_criterion_3_hand_values():
    assert ks_complement([1, 2, 3, 4], [1, 2, 3, 5]) == 0.75
    assert tv_complement([0, 0, 1, 1], [0, 0, 0, 1]) == 0.75
    assert correlation_similarity_from_r(0.8, 0.6) == pytest.approx(0.9)
    assert range_coverage([0, 10], [2, 10]) == pytest.approx(0.8)
    assert boundary_adherence([0, 10], [-1, 5, 11, 5]) == 0.5
    print("\nACCEPTANCE 3 PASS: hand-value checks reproduce exactly")


def _check_reference_run(real, schema, synth_path, expected, tolerances):
    synth = load_csv(synth_path, schema, enforce_levels=False)
    report = evaluate_datasets(real, synth)
    abs_tol = tolerances["aggregate_abs"]
    checked = []
    for metric, value in expected.get("aggregates", {}).items():
        mean, sd, _ = report.aggregates[metric]
        assert mean == pytest.approx(value[0], abs=abs_tol), \
            f"{synth_path.name} {metric} mean {mean:.3f} != {value[0]}"
        if len(value) > 1:
            assert sd == pytest.approx(value[1], abs=abs_tol), \
                f"{synth_path.name} {metric} sd {sd:.3f} != {value[1]}"
        checked.append(metric)
    if "ci_overlap" in expected:
        mean, sd, _ = report.aggregates[CI_OVERLAP]
        assert mean == pytest.approx(expected["ci_overlap"][0],
                                     abs=tolerances["ci_overlap_abs_pp"])
        checked.append(CI_OVERLAP)
    if "new_row_synthesis" in expected:
        nrs = report.aggregates[NEW_ROW_SYNTHESIS][0]
        assert round(nrs, 3) == expected["new_row_synthesis"], \
            f"{synth_path.name} NewRowSynthesis {nrs:.4f}"
        checked.append(NEW_ROW_SYNTHESIS)
    for column, count in expected.get("violations", {}).items():
        assert report.violations[column] == count, \
            f"{synth_path.name} violations[{column}]"
        checked.append(f"violations[{column}]")
    return checked


def test_criterion_4_reference_reproduction():
    data_dir = os.environ.get("SYNTHTAB_REFERENCE_DATA")
    if not data_dir:
        pytest.skip("SYNTHTAB_REFERENCE_DATA not set; criteria 1-3 and 5-7 "
                    "constitute acceptance without the external datasets")
    data_dir = Path(data_dir)
    spec = json.loads((REFERENCE / "expected_scores.json").read_text())
    tolerances = spec["tolerance"]
    total = 0
    with Timer() as t:
        for dataset in spec["datasets"].values():
            real_path = data_dir / dataset["real"]
            if not real_path.exists():
                continue
            schema = load_schema(FIXTURES / dataset["schema"])
            real = load_csv(real_path, schema)
            for synth_name, expected in dataset["runs"].items():
                synth_path = data_dir / synth_name
                if not synth_path.exists():
                    continue
                total += len(_check_reference_run(
                    real, schema, synth_path, expected, tolerances))
    if total == 0:
        pytest.skip(f"no reference files found under {data_dir}")
    assert t.elapsed < 30.0, f"reference reproduction took {t.elapsed:.1f}s"
    print(f"\nACCEPTANCE 4 PASS: {total} published values reproduced "
          f"in {t.elapsed:.1f}s")


def test_criterion_5_prompt_determinism():
    checked = 0
    for name, n in (("iris", 150), ("fish", 159), ("real_estate", 414)):
        ds, schema = load_fixture(name)
        prof, name_map = obfuscate(round_profile(profile(ds), 3))
        spec = GenerationSpec(n_rows=n,
                              include_all_correlations=(name == "iris"),
                              restrictions=derive_restrictions(schema))
        for s in (spec, amplify(spec, 1000)):
            text = build_prompt(prof, s, name_map=name_map)
            golden = (GOLDEN / f"{name}_n{s.n_rows}.txt").read_text()
            assert text == golden, f"{name} n={s.n_rows} drifted from golden"
            checked += 1
        base = build_prompt(prof, spec, name_map=name_map).splitlines()
        amp = build_prompt(prof, amplify(spec, 1000),
                           name_map=name_map).splitlines()
        diffs = [pair for pair in zip(base, amp) if pair[0] != pair[1]]
        assert len(diffs) == 1 and "rows." in diffs[0][0]
    # numeric token tracing is asserted in
    # test_promptgen.TestBuildPrompt.test_numeric_tokens_trace_to_inputs
    print(f"\nACCEPTANCE 5 PASS: {checked} golden prompts byte-identical; "
          f"amplified diff is one clause")


def test_criterion_6_local_generator_fidelity(tmp_path):
    ds, schema = load_fixture("iris")
    prof = profile(ds)
    with Timer() as t:
        sample_a = local_sample(prof, schema, 1000, seed=40)
        report = evaluate_datasets(ds, sample_a)
    ss = report.aggregates[STATISTIC_SIMILARITY][0]
    cs = report.aggregates[CORRELATION_SIMILARITY][0]
    ba = report.aggregates[BOUNDARY_ADHERENCE][0]
    assert ss >= 0.98, f"StatisticSimilarity {ss:.4f}"
    assert cs >= 0.95, f"CorrelationSimilarity {cs:.4f}"
    assert ba == 1.0
    assert CATEGORY_ADHERENCE not in report.aggregates  # no ordinal columns

    sample_b = local_sample(prof, schema, 1000, seed=40)
    path_a, path_b = tmp_path / "a.csv", tmp_path / "b.csv"
    write_csv(sample_a, path_a)
    write_csv(sample_b, path_b)
    assert path_a.read_bytes() == path_b.read_bytes()
    assert t.elapsed < 5.0

    # ordinal counterpart: adherence is 1.0 by construction
    re_ds, re_schema = load_fixture("real_estate")
    re_prof = profile(re_ds)
    re_sample = local_sample(re_prof, re_schema, 1000, seed=40)
    re_report = evaluate_datasets(re_ds, re_sample)
    assert re_report.aggregates[CATEGORY_ADHERENCE][0] == 1.0
    print(f"\nACCEPTANCE 6 PASS: StatSim {ss:.3f}, CorrSim {cs:.3f}, "
          f"BoundaryAdherence 1.0, CategoryAdherence 1.0, "
          f"byte-reproducible, {t.elapsed:.2f}s")


def test_criterion_7_pd_repair():
    rng = np.random.default_rng(20240607)
    repaired = 0
    for _ in range(100):
        k = int(rng.integers(2, 9))
        base = rng.uniform(-1, 1, (k, k))
        m = (base + base.T) / 2
        np.fill_diagonal(m, 1.0)
        out = nearest_pd(m, eps=1e-6)
        assert np.linalg.eigvalsh(out)[0] >= 1e-6
        assert np.max(np.abs(np.diag(out) - 1.0)) <= 1e-10
        if np.linalg.eigvalsh(m)[0] < 1e-6:
            repaired += 1
    assert repaired >= 50, "perturbation failed to break PD often enough"
    print(f"\nACCEPTANCE 7 PASS: 100 matrices repaired "
          f"({repaired} were non-PD), min eigenvalue >= 1e-6, "
          f"unit diagonal within 1e-10")
