"""Shared fixtures: arithmetic tables are expensive, build each once."""

import pytest
from hypothesis import HealthCheck, settings

from gaussgold.tables import build_table

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def table_small():
    """Norms up to 2000; enough for most exact unit checks."""
    return build_table(2000)


@pytest.fixture(scope="session")
def table_10k():
    return build_table(10**4)


@pytest.fixture(scope="session")
def table_100k():
    return build_table(10**5)


@pytest.fixture(scope="session")
def table_1m():
    return build_table(10**6)
