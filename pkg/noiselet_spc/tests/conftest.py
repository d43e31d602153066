import os

import numpy as np
import pytest

from noiselet_spc import util
from noiselet_spc.sensing.plan import make_plan
from noiselet_spc.transforms.noiselet import dense_noiselet


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    """Tests see the packaged defaults only."""
    for key in list(os.environ):
        if key.startswith(util.ENV_PREFIX):
            monkeypatch.delenv(key)


@pytest.fixture
def rng():
    return util.make_rng(1234)


def dense_rows(plan):
    """Sensing matrix of a plan from the dense noiselet matrix."""
    return dense_noiselet(plan.order).to_complex()[plan.row_indices() - 1]


def random_plan(q, ratio, seed=3):
    n = 1 << q
    m = max(2, 2 * int(round(ratio * n / 2)))
    return make_plan(q, m, seed)


def random_image(shape, seed=0):
    return util.make_rng(seed).uniform(size=shape)


@pytest.fixture
def assert_close():
    def check(actual, expected, tol):
        assert np.max(np.abs(np.asarray(actual) - np.asarray(expected))) < tol
    return check
