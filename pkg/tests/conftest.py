import pytest

from smagent.retail.seeddata import build_seed_db


@pytest.fixture
def db():
    return build_seed_db()


@pytest.fixture(scope="session")
def repo_root():
    from pathlib import Path

    return Path(__file__).resolve().parents[1]
