from __future__ import annotations

import numpy as np
import pytest

from skinforge import kernels


@pytest.fixture(params=kernels.available_backends())
def backend(request):
    """Run the test once per available kernel backend."""
    previous = kernels.BACKEND
    kernels.set_backend(request.param)
    yield request.param
    kernels.set_backend(previous)


@pytest.fixture
def rng():
    return np.random.default_rng(0xC0FFEE)


def random_frame(rng: np.random.Generator, h: int, w: int) -> np.ndarray:
    """A frame mixing noise with skin-toned patches so masks are non-trivial."""
    frame = rng.integers(0, 256, (h, w, 3), dtype=np.uint8)
    patches = rng.integers(1, 4)
    for _ in range(patches):
        y0 = int(rng.integers(0, max(1, h - 2)))
        x0 = int(rng.integers(0, max(1, w - 2)))
        ph = int(rng.integers(2, h - y0 + 1))
        pw = int(rng.integers(2, w - x0 + 1))
        tone = np.array(
            [rng.integers(150, 240), rng.integers(100, 180), rng.integers(60, 150)],
            dtype=np.uint8,
        )
        frame[y0:y0 + ph, x0:x0 + pw] = tone
    return frame
