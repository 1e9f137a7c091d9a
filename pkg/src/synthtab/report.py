"""Report rendering and plot-data exports.

The markdown report mirrors the usual benchmarking-table layout (one row
per metric, mean and standard deviation across columns or pairs). Plot
exports are plain CSV files carrying exactly the numbers a plotting tool
needs: correlation matrices for heatmaps, confidence intervals for error
bars, and ordinal level frequencies for distribution plots.
"""

from __future__ import annotations

import csv
import hashlib
import json
from pathlib import Path

from .data import Dataset
from .metrics import (
    CATEGORY_ADHERENCE,
    CATEGORY_COVERAGE,
    CI_OVERLAP,
    BOUNDARY_ADHERENCE,
    CORRELATION_SIMILARITY,
    KS_COMPLEMENT,
    NEW_ROW_SYNTHESIS,
    RANGE_COVERAGE,
    STATISTIC_SIMILARITY,
    TV_COMPLEMENT,
    MetricReport,
    ci_overlap_percent,
    display_name,
)
from .profiling import profile

FIDELITY_ORDER = (
    STATISTIC_SIMILARITY,
    RANGE_COVERAGE,
    BOUNDARY_ADHERENCE,
    KS_COMPLEMENT,
    CORRELATION_SIMILARITY,
    CATEGORY_COVERAGE,
    CATEGORY_ADHERENCE,
    TV_COMPLEMENT,
    CI_OVERLAP,
)


def _format_aggregate(metric: str, mean: float, sd: float, count: int) -> str:
    if metric == CI_OVERLAP:
        cell = f"{mean:.2f}%"
        if count > 1:
            cell += f" ± {sd:.2f}%"
        return cell
    cell = f"{mean:.3f}"
    if count > 1:
        cell += f" ± {sd:.3f}"
    return cell


def render_markdown(report: MetricReport) -> str:
    lines = [
        "# Synthetic data evaluation",
        "",
        f"Real: {report.real_name} (n={report.n_real}). "
        f"Synthetic: {report.synth_name} (n={report.n_synth})."
        + (" Amplified sample size." if report.amplified else ""),
        "",
        "| Metric | Score |",
        "| --- | --- |",
    ]
    for metric in FIDELITY_ORDER:
        if metric not in report.aggregates:
            continue
        if metric == CI_OVERLAP and report.amplified:
            lines.append(f"| {display_name(metric)} | - |")
            continue
        mean, sd, count = report.aggregates[metric]
        lines.append(
            f"| {display_name(metric)} | "
            f"{_format_aggregate(metric, mean, sd, count)} |"
        )
    mean, sd, count = report.aggregates[NEW_ROW_SYNTHESIS]
    lines += [
        "",
        "| Privacy | Score |",
        "| --- | --- |",
        f"| {NEW_ROW_SYNTHESIS} | {mean:.3f} |",
    ]
    violated = {c: n for c, n in report.violations.items() if n}
    lines += ["", "## Domain violations", ""]
    if violated:
        lines += ["| Column | Violating cells |", "| --- | --- |"]
        lines += [f"| {c} | {n} |" for c, n in violated.items()]
    else:
        lines.append("None.")
    if report.warnings:
        lines += ["", "## Warnings", ""]
        lines += [f"- {w}" for w in report.warnings]
    return "\n".join(lines) + "\n"


def save_report(report: MetricReport, out_dir: str | Path) -> tuple[Path, Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    json_path = out_dir / "report.json"
    md_path = out_dir / "report.md"
    with json_path.open("w", encoding="utf-8") as fh:
        json.dump(report.to_dict(), fh, indent=2)
        fh.write("\n")
    md_path.write_text(render_markdown(report), encoding="utf-8")
    return json_path, md_path


def _fmt(x: float) -> str:
    return repr(float(x))


def export_plot_data(real: Dataset, synths: dict[str, Dataset],
                     out_dir: str | Path,
                     real_name: str = "real") -> list[Path]:
    """Write heatmap/CI/frequency data files for a real dataset and any
    number of synthetic datasets.

    CI overlap percentages are only written for synthetic datasets with the
    same row count as the real one; amplified datasets have systematically
    narrower intervals, which would make the number misleading.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    datasets = {real_name: real, **synths}

    profiles = {name: profile(ds) for name, ds in datasets.items()}

    for name, prof in profiles.items():
        path = out_dir / f"heatmap_{name}.csv"
        matrix = prof.correlation_matrix()
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["", *prof.names])
            for row_name, row in zip(prof.names, matrix):
                writer.writerow(
                    [row_name, *("" if v != v else _fmt(v) for v in row)]
                )
        written.append(path)

    ci_path = out_dir / "ci_table.csv"
    with ci_path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["dataset", "column", "mean", "ci_lo", "ci_hi"])
        for name, prof in profiles.items():
            for s in prof.stats:
                if s.kind == "ordinal":
                    continue
                writer.writerow(
                    [name, s.name, _fmt(s.mean), _fmt(s.ci95[0]), _fmt(s.ci95[1])]
                )
    written.append(ci_path)

    overlap_path = out_dir / "ci_overlap.csv"
    with overlap_path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["dataset", "column", "overlap_percent"])
        for name, ds in synths.items():
            if ds.n_rows != real.n_rows:
                continue
            for col in real.schema.columns:
                if col.is_ordinal:
                    continue
                pct = ci_overlap_percent(real.column(col.name),
                                         ds.column(col.name))
                writer.writerow([name, col.name, _fmt(pct)])
    written.append(overlap_path)

    freq_path = out_dir / "ordinal_frequencies.csv"
    with freq_path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["dataset", "column", "level", "frequency"])
        for name, prof in profiles.items():
            for s in prof.stats:
                if s.levels is None:
                    continue
                for level, freq in zip(s.levels, s.level_freqs):
                    writer.writerow([name, s.name, _fmt(level), _fmt(freq)])
    written.append(freq_path)

    return written


def sha256_file(path: str | Path) -> str:
    h = hashlib.sha256()
    with Path(path).open("rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def write_manifest(out_dir: str | Path, command: str, inputs: list[Path],
                   flags: dict, outputs: list[Path]) -> Path:
    """Record inputs, flags, and content hashes for one CLI run."""
    out_dir = Path(out_dir)
    manifest = {
        "command": command,
        "inputs": {str(p): sha256_file(p) for p in inputs},
        "flags": flags,
        "outputs": {
            p.name: sha256_file(p) for p in outputs if p.exists()
        },
    }
    path = out_dir / "manifest.json"
    with path.open("w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path
