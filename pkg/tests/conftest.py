from pathlib import Path

import pytest

from synthtab import load_csv, load_schema, profile

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"

FIXTURE_NAMES = ["iris", "fish", "real_estate", "tiny_mixed", "tiny_wide"]


def load_fixture(name):
    schema = load_schema(FIXTURES / f"{name}.json")
    return load_csv(FIXTURES / f"{name}.csv", schema), schema


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


@pytest.fixture(scope="session")
def golden_dir():
    return GOLDEN


@pytest.fixture(scope="session")
def iris():
    return load_fixture("iris")[0]


@pytest.fixture(scope="session")
def iris_schema():
    return load_fixture("iris")[1]


@pytest.fixture(scope="session")
def iris_profile(iris):
    return profile(iris)


@pytest.fixture(scope="session")
def real_estate():
    return load_fixture("real_estate")[0]


@pytest.fixture(scope="session")
def real_estate_schema():
    return load_fixture("real_estate")[1]


@pytest.fixture(scope="session")
def tiny_mixed():
    return load_fixture("tiny_mixed")[0]
