import pytest

from sievecalc.runner import RunConfig, run_terms
from sievecalc.terms.base import shared_tables


@pytest.fixture(scope="session")
def tables():
    t, _ = shared_tables()
    return t


@pytest.fixture(scope="session")
def steps():
    _, s = shared_tables()
    return s


@pytest.fixture(scope="session")
def bundled_results():
    """Full default-configuration evaluation of both families.

    Session-scoped because it is by far the most expensive fixture (tens of
    minutes); only the slow-marked conditional suites request it.
    """
    return {
        "goldbach": run_terms(RunConfig(family="goldbach"), threads=1),
        "twin": run_terms(RunConfig(family="twin"), threads=1),
    }
