import pytest

from groupoidal.config import Config
from groupoidal.formats import load_fixture


@pytest.fixture(scope="session")
def config():
    return Config()


@pytest.fixture(scope="session")
def ex1(config):
    return load_fixture("ex1", config)


@pytest.fixture(scope="session")
def ex2(config):
    return load_fixture("ex2", config)


@pytest.fixture(scope="session")
def ex3(config):
    return load_fixture("ex3", config)


@pytest.fixture(scope="session")
def nongalois(config):
    return load_fixture("nongalois", config)


@pytest.fixture(scope="session")
def fixtures(ex1, ex2, ex3):
    return {"ex1": ex1, "ex2": ex2, "ex3": ex3}
