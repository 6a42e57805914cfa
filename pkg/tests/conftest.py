import functools

import numpy as np
import pytest

from tessella.io import load


@functools.lru_cache(maxsize=None)
def _problem(name):
    return load(name)


@pytest.fixture
def problem():
    return _problem


@pytest.fixture(autouse=True)
def _quiet_numpy():
    with np.errstate(all="ignore"):
        yield
