import numpy as np
import pytest

from tord.corpus import CORPUS


@pytest.fixture(params=sorted(CORPUS))
def corpus_case(request):
    spec, grid = CORPUS[request.param]()
    return request.param, spec, grid


@pytest.fixture
def rng():
    return np.random.default_rng(20260114)
