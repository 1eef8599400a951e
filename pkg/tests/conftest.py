import pytest

from picheck.driver import Session
from picheck.harness import CORPUS_DIR


def load(*names: str) -> Session:
    session = Session()
    for name in names:
        report = session.check_file(str(CORPUS_DIR / name))
        assert report.ok, report.to_json()
    return session


@pytest.fixture(scope="session")
def arith():
    """Session with arith.pv (and the equality lemmas it requires) loaded."""
    return load("arith.pv")


@pytest.fixture
def session():
    return Session()
