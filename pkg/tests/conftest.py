import numpy as np
import pytest

from shaplab import _kernels

BACKENDS = [pytest.param(_kernels.python, id="python")]
if _kernels.compiled is not None:
    BACKENDS.append(pytest.param(_kernels.compiled, id="cython"))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param
