import numpy as np
import pytest

from orliczops import young


CATALOG_ENTRIES = [
    young.power(1.5),
    young.power(2),
    young.power(3),
    young.power(4),
    young.exp_power(1),
    young.exp_power(2),
    young.l_log_l(1),
    young.l_log_l(2),
]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
