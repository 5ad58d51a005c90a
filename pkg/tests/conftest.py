import pytest

from spatialent import _kernels
from spatialent.regions import RegionSplit


@pytest.fixture(params=sorted(_kernels.backends()))
def backend(request):
    """Each available kernel implementation (compiled and/or pure Python)."""
    return _kernels.backends()[request.param]


@pytest.fixture
def sym():
    return RegionSplit(0.0)
