"""Regenerate the bundled test fixture datasets and their schema files.

The committed CSVs under tests/fixtures/ are the source of truth; this
script exists for provenance. Rerunning it reproduces them byte-for-byte
with the pinned seed (subject to numpy RNG stream stability across
versions), so prefer the committed files.
"""

import json
from pathlib import Path

import numpy as np

from synthtab.data import ColumnSchema, Dataset, TableSchema, write_csv

FIXTURES = Path(__file__).resolve().parents[1] / "tests" / "fixtures"


def save_schema_file(name, columns):
    path = FIXTURES / f"{name}.json"
    with path.open("w", encoding="utf-8") as fh:
        json.dump({"columns": columns}, fh, indent=2)
        fh.write("\n")
    print(f"wrote {path}")


def write_fixture(name, schema, values):
    ds = Dataset.from_rows(schema, values)
    path = FIXTURES / f"{name}.csv"
    write_csv(ds, path)
    print(f"wrote {path} ({ds.n_rows} rows)")


def make_iris():
    from sklearn.datasets import load_iris

    data = load_iris().data
    schema = TableSchema(tuple(
        ColumnSchema(n, hard_min=0.0)
        for n in ("sepal_length", "sepal_width", "petal_length", "petal_width")
    ))
    write_fixture("iris", schema, data)
    save_schema_file("iris", [
        {"name": n, "kind": "continuous", "hard_min": 0.0}
        for n in schema.names
    ])


def make_fish():
    rng = np.random.default_rng(20240601)
    n = 159
    # three loose size clusters, lengths strongly collinear, weight ~ length^3
    cluster = rng.choice(3, size=n, p=[0.45, 0.35, 0.2])
    base = np.array([22.0, 30.0, 40.0])[cluster] + rng.normal(0, 3.5, n)
    base = np.clip(base, 8.0, 60.0)
    length_vertical = base * 0.92 + rng.normal(0, 0.8, n)
    length_diagonal = base + rng.normal(0, 0.6, n)
    length_cross = base * 1.10 + rng.normal(0, 0.9, n)
    height = base * (0.27 + 0.05 * (cluster == 1)) + rng.normal(0, 1.1, n)
    width = base * 0.14 + rng.normal(0, 0.5, n)
    weight = 0.0135 * base ** 3 + rng.normal(0, 45, n)
    values = np.column_stack([
        np.round(np.clip(weight, 5, None), 1),
        np.round(np.clip(length_vertical, 5, None), 1),
        np.round(np.clip(length_diagonal, 5, None), 1),
        np.round(np.clip(length_cross, 5, None), 1),
        np.round(np.clip(height, 1, None), 2),
        np.round(np.clip(width, 1, None), 2),
    ])
    names = ("weight", "length_vertical", "length_diagonal",
             "length_cross", "height", "width")
    schema = TableSchema(tuple(ColumnSchema(n, hard_min=0.0) for n in names))
    write_fixture("fish", schema, values)
    save_schema_file("fish", [
        {"name": n, "kind": "continuous", "hard_min": 0.0} for n in names
    ])


def make_real_estate():
    rng = np.random.default_rng(20240602)
    n = 414
    distance = np.exp(rng.normal(6.2, 1.15, n))
    distance = np.clip(distance, 23.0, 6500.0)
    stores = np.clip(
        np.round(10.5 - 1.35 * np.log(distance) + rng.normal(0, 1.6, n)),
        0, 10,
    )
    house_age = np.clip(rng.gamma(2.2, 8.0, n), 0, 44)
    latitude = 24.96 + 0.013 * rng.standard_normal(n) \
        - 0.000004 * (distance - distance.mean())
    longitude = 121.53 + 0.015 * rng.standard_normal(n) \
        - 0.000006 * (distance - distance.mean())
    price = (
        52.0
        - 5.6 * np.log(distance)
        + 1.1 * stores
        - 0.25 * house_age
        + rng.normal(0, 6.5, n)
    )
    price = np.clip(price, 7.0, 120.0)
    values = np.column_stack([
        np.round(house_age, 1),
        np.round(distance, 2),
        stores,
        np.round(latitude, 5),
        np.round(longitude, 5),
        np.round(price, 1),
    ])
    schema = TableSchema((
        ColumnSchema("house_age", hard_min=0.0),
        ColumnSchema("distance_to_mrt", hard_min=0.0),
        ColumnSchema("convenience_stores", kind="ordinal",
                     levels=tuple(float(v) for v in range(11))),
        ColumnSchema("latitude"),
        ColumnSchema("longitude"),
        ColumnSchema("price_per_unit_area", hard_min=0.0),
    ))
    write_fixture("real_estate", schema, values)
    save_schema_file("real_estate", [
        {"name": "house_age", "kind": "continuous", "hard_min": 0.0},
        {"name": "distance_to_mrt", "kind": "continuous", "hard_min": 0.0},
        {"name": "convenience_stores", "kind": "ordinal",
         "levels": list(range(11))},
        {"name": "latitude", "kind": "continuous"},
        {"name": "longitude", "kind": "continuous"},
        {"name": "price_per_unit_area", "kind": "continuous", "hard_min": 0.0},
    ])


def make_tiny_mixed():
    # includes an ordinal column and a zero-variance column on purpose
    values = [
        [1.5, 1, 7], [2.25, 2, 7], [3.0, 3, 7], [2.75, 2, 7],
        [1.25, 1, 7], [3.5, 3, 7], [2.0, 2, 7], [2.5, 2, 7],
    ]
    schema = TableSchema((
        ColumnSchema("measure", hard_min=0.0),
        ColumnSchema("grade", kind="ordinal", levels=(1.0, 2.0, 3.0)),
        ColumnSchema("batch"),
    ))
    write_fixture("tiny_mixed", schema, values)
    save_schema_file("tiny_mixed", [
        {"name": "measure", "kind": "continuous", "hard_min": 0.0},
        {"name": "grade", "kind": "ordinal", "levels": [1, 2, 3]},
        {"name": "batch", "kind": "continuous"},
    ])


def make_tiny_wide():
    rng = np.random.default_rng(20240603)
    base = rng.normal(0, 1, 12)
    values = np.column_stack([
        np.round(10 + 2 * base + rng.normal(0, 0.5, 12), 3),
        np.round(5 - base + rng.normal(0, 0.8, 12), 3),
        np.round(rng.uniform(0, 1, 12), 3),
        np.round(100 + 15 * base + rng.normal(0, 4, 12), 3),
        np.round(rng.normal(-3, 2, 12), 3),
    ])
    names = ("a", "b", "c", "d", "e")
    schema = TableSchema(tuple(ColumnSchema(n) for n in names))
    write_fixture("tiny_wide", schema, values)
    save_schema_file("tiny_wide", [
        {"name": n, "kind": "continuous"} for n in names
    ])


if __name__ == "__main__":
    FIXTURES.mkdir(parents=True, exist_ok=True)
    make_iris()
    make_fish()
    make_real_estate()
    make_tiny_mixed()
    make_tiny_wide()
