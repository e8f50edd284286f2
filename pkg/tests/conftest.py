import numpy as np
import pytest

from sixvertex.numerics import rel_dev


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def assert_close(x, y, tol, relative=True):
    dev = rel_dev(x, y) if relative else abs(x - y)
    assert dev <= tol, f"deviation {dev} above {tol}: {x} vs {y}"
