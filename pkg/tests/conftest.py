import pytest

from heckelab.forms import REGISTRY, expand


@pytest.fixture(scope="session")
def forms_10k():
    """All registry forms expanded to X = 10^4, shared across test modules."""
    return {name: expand(name, 10_000, use_cache=False) for name in REGISTRY}


@pytest.fixture(scope="session")
def delta_10k(forms_10k):
    return forms_10k["delta"]
