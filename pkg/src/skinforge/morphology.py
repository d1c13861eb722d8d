"""Binary morphology and the grayscale texture gradient.

Masks are 2-D bool arrays. Binary operations treat out-of-bounds pixels as
background; the grayscale gradient replicates edge pixels so flat borders
do not register as texture. Both border policies are fixed.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import kernels


@dataclass(frozen=True)
class StructuringElement:
    """A set of (dx, dy) probe offsets anchored at (0, 0)."""

    offsets: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        offs = tuple(sorted({(int(dx), int(dy)) for dx, dy in self.offsets}))
        object.__setattr__(self, "offsets", offs)
        if (0, 0) not in offs:
            raise ValueError("structuring element must contain the anchor (0, 0)")
        if any((-dx, -dy) not in set(offs) for dx, dy in offs):
            raise ValueError("structuring element must be symmetric under negation")

    @cached_property
    def offset_array(self) -> np.ndarray:
        return np.array(self.offsets, dtype=np.int64).reshape(-1, 2)

    @cached_property
    def reach_x(self) -> int:
        return max(abs(dx) for dx, _ in self.offsets)

    @cached_property
    def reach_y(self) -> int:
        return max(abs(dy) for _, dy in self.offsets)

    def __len__(self) -> int:
        return len(self.offsets)


def disk_se(radius: int) -> StructuringElement:
    """Lattice-point disk: all offsets with dx^2 + dy^2 <= radius^2."""
    if radius < 1:
        raise ValueError("radius must be >= 1")
    offs = [
        (dx, dy)
        for dy in range(-radius, radius + 1)
        for dx in range(-radius, radius + 1)
        if dx * dx + dy * dy <= radius * radius
    ]
    return StructuringElement(tuple(offs))


DISK2 = disk_se(2)


def _as_mask(mask: np.ndarray) -> np.ndarray:
    m = np.asarray(mask)
    if m.ndim != 2 or m.dtype != np.bool_:
        raise ValueError("mask must be a 2-D bool array")
    return np.ascontiguousarray(m)


def binary_erode(mask: np.ndarray, se: StructuringElement = DISK2) -> np.ndarray:
    """True where every probe offset lands inside the image on a true pixel."""
    return kernels.erode_full(_as_mask(mask), se.offset_array)


def binary_dilate(mask: np.ndarray, se: StructuringElement = DISK2) -> np.ndarray:
    """True where some probe offset lands inside the image on a true pixel."""
    return kernels.dilate_full(_as_mask(mask), se.offset_array)


def binary_open(mask: np.ndarray, se: StructuringElement = DISK2) -> np.ndarray:
    """Erosion followed by dilation with the same element."""
    return binary_dilate(binary_erode(mask, se), se)


def gray_gradient(img: np.ndarray) -> np.ndarray:
    """3x3 window max minus window min, replicate-edge at the borders."""
    g = np.ascontiguousarray(img, dtype=np.float64)
    if g.ndim != 2 or g.shape[0] < 1 or g.shape[1] < 1:
        raise ValueError("image must be a non-empty 2-D plane")
    return kernels.gradient_full(g)
