import pytest

from topolab.fintop import enumerate_topologies
from topolab.corpus import corpus_presentations
from topolab.star import build_star


@pytest.fixture(scope="session")
def enumerations():
    """All topologies on 0..4 labeled points, keyed by point count."""
    return {n: list(enumerate_topologies(n)) for n in range(5)}


@pytest.fixture(scope="session")
def corpus_models():
    return [(name, p, build_star(p)) for name, p in corpus_presentations()]
