import pytest

from rickerpp import ModelParams


@pytest.fixture
def bench_params():
    """The benchmark parameter set used throughout: b0=4, gamma=3/2,
    c=9/10, s=1/10, r=1."""
    return ModelParams(r=1.0, b0=4.0, gamma=1.5, c=0.9, s=0.1)
