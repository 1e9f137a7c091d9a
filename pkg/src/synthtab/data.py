"""Tabular schema and dataset model, plus CSV ingestion and cleaning.

Datasets are immutable, column-typed numeric tables. Ordinal columns carry an
explicit ordered level set; continuous columns may carry hard domain bounds
(used for prompt restrictions and violation audits, never enforced on the
values themselves).
"""

from __future__ import annotations

import csv
import json
import logging
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    DuplicateName,
    EmptyFile,
    LevelViolation,
    MissingColumn,
    MissingValue,
    NonNumericCell,
    UnknownColumn,
)

log = logging.getLogger(__name__)

CONTINUOUS = "continuous"
ORDINAL = "ordinal"


@dataclass(frozen=True)
class ColumnSchema:
    """One column: name, kind, optional hard domain bounds, ordinal levels."""

    name: str
    kind: str = CONTINUOUS
    hard_min: float | None = None
    hard_max: float | None = None
    levels: tuple[float, ...] | None = None

    def __post_init__(self):
        if not self.name:
            raise ValueError("column name must be nonempty")
        if self.kind not in (CONTINUOUS, ORDINAL):
            raise ValueError(f"unknown column kind {self.kind!r}")
        if self.kind == ORDINAL:
            if not self.levels:
                raise ValueError(f"ordinal column {self.name!r} requires levels")
            lv = tuple(float(x) for x in self.levels)
            if any(not math.isfinite(x) for x in lv):
                raise ValueError(f"levels of {self.name!r} must be finite")
            if any(b <= a for a, b in zip(lv, lv[1:])):
                raise ValueError(f"levels of {self.name!r} must be strictly increasing")
            object.__setattr__(self, "levels", lv)
        elif self.levels is not None:
            raise ValueError(f"continuous column {self.name!r} must not carry levels")
        if (
            self.hard_min is not None
            and self.hard_max is not None
            and self.hard_min > self.hard_max
        ):
            raise ValueError(f"hard_min > hard_max for column {self.name!r}")

    @property
    def is_ordinal(self) -> bool:
        return self.kind == ORDINAL


@dataclass(frozen=True)
class TableSchema:
    """Ordered collection of column schemas with unique names."""

    columns: tuple[ColumnSchema, ...]

    def __post_init__(self):
        object.__setattr__(self, "columns", tuple(self.columns))
        names = [c.name for c in self.columns]
        if len(set(names)) != len(names):
            raise DuplicateName("schema column names must be unique")

    @property
    def names(self) -> list[str]:
        return [c.name for c in self.columns]

    def __len__(self) -> int:
        return len(self.columns)

    def column(self, name: str) -> ColumnSchema:
        for c in self.columns:
            if c.name == name:
                return c
        raise UnknownColumn(f"no column named {name!r}")

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise UnknownColumn(f"no column named {name!r}") from None


@dataclass(frozen=True)
class Dataset:
    """Immutable column-major numeric table conforming to a TableSchema."""

    schema: TableSchema
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.float64)
        if arr.ndim != 2:
            raise ValueError("values must be a 2-D matrix")
        if arr.shape[1] != len(self.schema):
            raise ValueError(
                f"value matrix has {arr.shape[1]} columns, schema has {len(self.schema)}"
            )
        if not np.all(np.isfinite(arr)):
            raise ValueError("dataset cells must all be finite")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @classmethod
    def from_rows(cls, schema: TableSchema, rows: Iterable[Sequence[float]],
                  check_levels: bool = True) -> "Dataset":
        arr = np.asarray(list(rows), dtype=np.float64).reshape(-1, len(schema))
        ds = cls(schema, arr)
        if check_levels:
            ds.check_levels()
        return ds

    def check_levels(self) -> None:
        """Raise LevelViolation if any ordinal cell is outside its level set."""
        for j, col in enumerate(self.schema.columns):
            if not col.is_ordinal:
                continue
            allowed = np.asarray(col.levels)
            ok = np.isin(self.values[:, j], allowed)
            if not ok.all():
                i = int(np.flatnonzero(~ok)[0])
                raise LevelViolation(i, col.name, float(self.values[i, j]))

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def n_cols(self) -> int:
        return self.values.shape[1]

    def column(self, name: str) -> np.ndarray:
        return self.values[:, self.schema.index(name)]


def _parse_cell(text: str, row: int, column: str) -> float:
    stripped = text.strip()
    if stripped == "":
        raise MissingValue(row, column)
    try:
        value = float(stripped)
    except ValueError:
        raise NonNumericCell(row, column, text) from None
    if not math.isfinite(value):
        raise NonNumericCell(row, column, text)
    return value


def load_csv(path: str | Path, schema: TableSchema, *,
             drop_incomplete: bool = False,
             enforce_levels: bool = True) -> Dataset:
    """Read a CSV file into a Dataset, reordering columns to schema order.

    The header row must contain every schema column (order-insensitive); extra
    columns are ignored. Blank cells raise MissingValue unless
    ``drop_incomplete`` is set, in which case the whole row is dropped.
    ``enforce_levels=False`` admits ordinal values outside the level set, for
    auditing third-party synthetic output.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyFile(f"{path} is empty") from None
        header = [h.strip() for h in header]
        missing = [n for n in schema.names if n not in header]
        if missing:
            raise MissingColumn(f"{path} lacks column(s): {', '.join(missing)}")
        col_idx = [header.index(n) for n in schema.names]

        rows: list[list[float]] = []
        dropped = 0
        for i, record in enumerate(reader, start=1):
            if not record or all(cell.strip() == "" for cell in record):
                continue
            if drop_incomplete and any(
                j >= len(record) or record[j].strip() == "" for j in col_idx
            ):
                dropped += 1
                continue
            row = []
            for name, j in zip(schema.names, col_idx):
                if j >= len(record):
                    raise MissingValue(i, name)
                row.append(_parse_cell(record[j], i, name))
            rows.append(row)

    if not rows:
        raise EmptyFile(f"{path} contains no data rows")
    if dropped:
        log.info("dropped %d incomplete row(s) from %s", dropped, path)
    return Dataset.from_rows(schema, rows, check_levels=enforce_levels)


def _format_value(x: float) -> str:
    # shortest representation that round-trips exactly
    x = float(x)
    if x == int(x) and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


def write_csv(ds: Dataset, path: str | Path) -> None:
    """Write a Dataset back to CSV; load_csv(write_csv(ds)) recovers ds exactly."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(ds.schema.names)
        for row in ds.values:
            writer.writerow([_format_value(v) for v in row])


def drop_columns(ds: Dataset, names: Sequence[str]) -> Dataset:
    """Return a copy of the dataset without the named columns."""
    for n in names:
        ds.schema.index(n)  # raises UnknownColumn
    keep = [i for i, c in enumerate(ds.schema.columns) if c.name not in set(names)]
    schema = TableSchema(tuple(ds.schema.columns[i] for i in keep))
    return Dataset(schema, ds.values[:, keep])


def rename_columns(ds: Dataset, mapping: Mapping[str, str]) -> Dataset:
    """Return a copy of the dataset with columns renamed per the mapping."""
    for old in mapping:
        ds.schema.index(old)  # raises UnknownColumn
    new_names = [mapping.get(c.name, c.name) for c in ds.schema.columns]
    if len(set(new_names)) != len(new_names):
        raise DuplicateName(f"renaming produces duplicate names: {new_names}")
    columns = tuple(
        replace(c, name=n) for c, n in zip(ds.schema.columns, new_names)
    )
    return Dataset(TableSchema(columns), ds.values)


def schema_to_dict(schema: TableSchema) -> dict:
    cols = []
    for c in schema.columns:
        d: dict = {"name": c.name, "kind": c.kind}
        if c.hard_min is not None:
            d["hard_min"] = c.hard_min
        if c.hard_max is not None:
            d["hard_max"] = c.hard_max
        if c.levels is not None:
            d["levels"] = list(c.levels)
        cols.append(d)
    return {"columns": cols}


def schema_from_dict(data: Mapping) -> TableSchema:
    columns = []
    for d in data["columns"]:
        columns.append(
            ColumnSchema(
                name=d["name"],
                kind=d.get("kind", CONTINUOUS),
                hard_min=d.get("hard_min"),
                hard_max=d.get("hard_max"),
                levels=tuple(d["levels"]) if d.get("levels") is not None else None,
            )
        )
    return TableSchema(tuple(columns))


def load_schema(path: str | Path) -> TableSchema:
    with Path(path).open(encoding="utf-8") as fh:
        return schema_from_dict(json.load(fh))


def save_schema(schema: TableSchema, path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        json.dump(schema_to_dict(schema), fh, indent=2)
        fh.write("\n")
