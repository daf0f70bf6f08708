import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tourpaths import _kernels_numpy  # noqa: E402

BACKENDS = {"numpy": _kernels_numpy}
try:
    from tourpaths import _kernels_numba

    BACKENDS["numba"] = _kernels_numba
except ImportError:  # pragma: no cover
    pass


@pytest.fixture(params=sorted(BACKENDS))
def backend(request):
    return BACKENDS[request.param]


DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"
