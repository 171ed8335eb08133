import sys
from pathlib import Path

import pytest

# oracles.py lives next to the tests, not inside the package
sys.path.insert(0, str(Path(__file__).parent))

from taxomine.normalize import default_stopwords
from taxomine.terms import from_surfaces

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def stops():
    return default_stopwords()


@pytest.fixture
def make_catalog(stops):
    """Catalog factory: make_catalog(["a", "b"], root="a")."""

    def build(surfaces, root=None, domain="testdom"):
        if root is None:
            root = surfaces[0]
        return from_surfaces(surfaces, domain, root, stops)

    return build


@pytest.fixture(scope="session")
def data_dir():
    return DATA
