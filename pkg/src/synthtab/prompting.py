"""Deterministic plain-language generation prompts.

A prompt is built from a rounded, name-obfuscated profile and a
GenerationSpec. Identical inputs always produce byte-identical text, and
every numeral in the text comes from the profile, the requested row count,
the column count, or a restriction bound; nothing is invented.

Section order is fixed: output-format instruction, row count, per-column
statistics, restrictions, significant correlations, column-naming clause.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Mapping

from .data import TableSchema
from .errors import EmptyProfile, UnknownColumn
from .profiling import DatasetProfile, significant_pairs

SPREADSHEET_FILE = "spreadsheet_file"
INLINE_CSV = "inline_csv"

FORMAT_INSTRUCTIONS = {
    SPREADSHEET_FILE: (
        "Generate a synthetic dataset and provide it as a downloadable "
        "spreadsheet file (.xlsx)."
    ),
    INLINE_CSV: (
        "Generate a synthetic dataset and output it directly as "
        "comma-separated values (CSV) text with a header row."
    ),
}

DEFAULT_TEMPLATE = """{format_instruction}

{row_count_clause}

{columns_block}

{restrictions_block}

{correlations_block}

{naming_clause}
"""


@dataclass(frozen=True)
class GenerationSpec:
    """Everything the prompt needs beyond the profile itself."""

    n_rows: int
    decimals: int = 3
    corr_threshold: float = 0.20
    include_all_correlations: bool = False
    output_format: str = SPREADSHEET_FILE
    restrictions: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.n_rows < 1:
            raise ValueError("n_rows must be >= 1")
        if self.decimals < 0:
            raise ValueError("decimals must be >= 0")
        if self.output_format not in FORMAT_INSTRUCTIONS:
            raise ValueError(f"unknown output format {self.output_format!r}")


def amplify(spec: GenerationSpec, n: int) -> GenerationSpec:
    """Same spec with the target row count replaced."""
    if n < 1:
        raise ValueError("n_rows must be >= 1")
    return replace(spec, n_rows=n)


@dataclass(frozen=True)
class NameMap:
    """Bijection between original column names and X1..Xk placeholders."""

    pairs: tuple[tuple[str, str], ...]  # (original, obfuscated), column order

    def obfuscated(self, original: str) -> str:
        for o, x in self.pairs:
            if o == original:
                return x
        raise UnknownColumn(f"no column named {original!r} in name map")

    def original(self, obfuscated: str) -> str:
        for o, x in self.pairs:
            if x == obfuscated:
                return o
        raise UnknownColumn(f"no obfuscated name {obfuscated!r} in name map")

    @property
    def to_obfuscated(self) -> dict[str, str]:
        return dict(self.pairs)

    @property
    def to_original(self) -> dict[str, str]:
        return {x: o for o, x in self.pairs}

    def save(self, path: str | Path) -> None:
        with Path(path).open("w", encoding="utf-8") as fh:
            json.dump(self.to_obfuscated, fh, indent=2)
            fh.write("\n")

    @classmethod
    def load(cls, path: str | Path) -> "NameMap":
        with Path(path).open(encoding="utf-8") as fh:
            return cls(tuple(json.load(fh).items()))

    @classmethod
    def for_names(cls, names) -> "NameMap":
        return cls(tuple((n, f"X{i}") for i, n in enumerate(names, start=1)))


def rename_profile(p: DatasetProfile, mapping: Mapping[str, str]) -> DatasetProfile:
    stats = tuple(replace(s, name=mapping[s.name]) for s in p.stats)
    corr = tuple(
        replace(e, col_a=mapping[e.col_a], col_b=mapping[e.col_b]) for e in p.corr
    )
    return DatasetProfile(stats, corr, p.n_rows, p.warnings)


def obfuscate(p: DatasetProfile) -> tuple[DatasetProfile, NameMap]:
    """Replace every column name with X1..Xk (column order); return the map."""
    name_map = NameMap.for_names(p.names)
    return rename_profile(p, name_map.to_obfuscated), name_map


def deobfuscate(p: DatasetProfile, name_map: NameMap) -> DatasetProfile:
    return rename_profile(p, name_map.to_original)


def is_obfuscated(p: DatasetProfile) -> bool:
    return all(re.fullmatch(r"X\d+", n) for n in p.names)


def derive_restrictions(schema: TableSchema) -> dict[str, str]:
    """Restriction sentences implied by hard domain bounds.

    Ordinal columns carry no extra restriction; their level set is already
    stated in the statistics section.
    """
    out: dict[str, str] = {}
    for c in schema.columns:
        if c.is_ordinal:
            continue
        if c.hard_min == 0 and c.hard_max is None:
            out[c.name] = "all values must be non-negative"
        elif c.hard_min is not None and c.hard_max is not None:
            out[c.name] = (
                f"all values must be between {_fmt_bound(c.hard_min)} "
                f"and {_fmt_bound(c.hard_max)}"
            )
        elif c.hard_min is not None:
            out[c.name] = f"all values must be at least {_fmt_bound(c.hard_min)}"
        elif c.hard_max is not None:
            out[c.name] = f"all values must be at most {_fmt_bound(c.hard_max)}"
    return out


def _fmt_bound(x: float) -> str:
    return str(int(x)) if x == int(x) else repr(float(x))


def _fmt_stat(x: float, decimals: int) -> str:
    return f"{x:.{decimals}f}"


def _fmt_level(x: float, decimals: int) -> str:
    return str(int(x)) if x == int(x) else f"{x:.{decimals}f}"


def build_prompt(p: DatasetProfile, spec: GenerationSpec,
                 name_map: NameMap | None = None,
                 template: str | None = None) -> str:
    """Render the generation prompt. Pure function of its inputs.

    ``p`` is expected to be already rounded to ``spec.decimals`` (see
    round_profile) and obfuscated. Restriction keys using original column
    names are translated through ``name_map`` when one is given.
    """
    if not p.stats:
        raise EmptyProfile("profile has no columns")
    names = p.names
    d = spec.decimals

    restrictions: dict[str, str] = {}
    for key, text in spec.restrictions.items():
        if key in names:
            restrictions[key] = text
        elif name_map is not None:
            restrictions[name_map.obfuscated(key)] = text
        else:
            raise UnknownColumn(f"restriction for unknown column {key!r}")

    column_lines = []
    for s in p.stats:
        if s.levels is not None:
            levels = ", ".join(_fmt_level(v, d) for v in s.levels)
            freqs = ", ".join(
                f"{_fmt_level(v, d)}: {_fmt_stat(f, d)}"
                for v, f in zip(s.levels, s.level_freqs)
            )
            column_lines.append(
                f"- {s.name}: ordinal column with allowed values {levels}; "
                f"relative frequencies {freqs}."
            )
        else:
            column_lines.append(
                f"- {s.name}: mean {_fmt_stat(s.mean, d)}, "
                f"standard deviation {_fmt_stat(s.sd, d)}, "
                f"range {_fmt_stat(s.min, d)} to {_fmt_stat(s.max, d)}."
            )
    columns_block = (
        "Each column must have the following statistical properties:\n"
        + "\n".join(column_lines)
    )

    restriction_lines = [
        f"- {n}: {restrictions[n]}." for n in names if n in restrictions
    ]
    restrictions_block = (
        "Restrictions:\n" + "\n".join(restriction_lines)
        if restriction_lines
        else ""
    )

    pairs = significant_pairs(p, spec.corr_threshold,
                              spec.include_all_correlations)
    correlation_lines = [
        f"- {e.col_a} and {e.col_b}: r = {_fmt_stat(e.r, d)}" for e in pairs
    ]
    correlations_block = (
        "The data must reproduce the following bivariate correlations "
        "(Pearson's r):\n" + "\n".join(correlation_lines)
        if correlation_lines
        else ""
    )

    if len(names) == 1:
        naming_clause = f"Name the column {names[0]}."
    else:
        naming_clause = (
            f"Name the columns {names[0]} through {names[-1]}, in this order."
        )

    text = (template or DEFAULT_TEMPLATE).format(
        format_instruction=FORMAT_INSTRUCTIONS[spec.output_format],
        row_count_clause=f"The dataset must contain {spec.n_rows} rows.",
        n_rows=spec.n_rows,
        n_cols=len(names),
        first_col=names[0],
        last_col=names[-1],
        columns_block=columns_block,
        restrictions_block=restrictions_block,
        correlations_block=correlations_block,
        naming_clause=naming_clause,
    )
    # collapse blank sections left by omitted blocks
    text = re.sub(r"\n{3,}", "\n\n", text).strip() + "\n"
    return text
