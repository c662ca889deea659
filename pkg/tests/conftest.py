import numpy as np
import pytest

from gisk import _kernels_py

_BACKENDS = [("py", _kernels_py)]
try:
    from gisk import _kernels_cy

    _BACKENDS.append(("c", _kernels_cy))
except ImportError:
    pass


@pytest.fixture(params=_BACKENDS, ids=[name for name, _ in _BACKENDS])
def kernel(request):
    return request.param[1]


@pytest.fixture
def rng():
    return np.random.default_rng(20240901)
