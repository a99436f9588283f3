import pytest

from pkh import corpus
from pkh.complexes import build_complex


@pytest.fixture(scope="session")
def diagrams():
    """Corpus diagrams, built once per session."""
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = corpus.build(name)
        return cache[name]

    return get


@pytest.fixture(scope="session")
def complexes(diagrams):
    """Shared Khovanov complexes so slices and reductions are reused."""
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = build_complex(diagrams(name))
        return cache[name]

    return get
