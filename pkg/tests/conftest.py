import pytest
from hypothesis import HealthCheck, settings

from diagbase.catalog import aut_action

settings.register_profile("repo", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")


@pytest.fixture(scope="session")
def a5():
    return aut_action("A5")


@pytest.fixture(scope="session")
def a6():
    return aut_action("A6")


@pytest.fixture(scope="session")
def l27():
    return aut_action("L2(7)")
