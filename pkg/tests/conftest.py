import pathlib

import pytest

from assortopt.io import load_instance

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def nesting_fixture():
    """The committed witness instance plus its recorded witness metadata."""
    instance, metadata = load_instance(str(FIXTURES / "nesting_witness.json"))
    return instance, metadata


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES
