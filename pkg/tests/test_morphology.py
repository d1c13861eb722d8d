from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from skinforge.morphology import (
    StructuringElement,
    binary_dilate,
    binary_erode,
    binary_open,
    disk_se,
    gray_gradient,
)

DISK2 = disk_se(2)


# Definitional brute-force oracles, per-pixel and unoptimized on purpose.

def erode_bf(mask: np.ndarray, se: StructuringElement) -> np.ndarray:
    h, w = mask.shape
    out = np.zeros_like(mask)
    for y in range(h):
        for x in range(w):
            out[y, x] = all(
                0 <= x + dx < w and 0 <= y + dy < h and mask[y + dy, x + dx]
                for dx, dy in se.offsets
            )
    return out


def dilate_bf(mask: np.ndarray, se: StructuringElement) -> np.ndarray:
    h, w = mask.shape
    out = np.zeros_like(mask)
    for y in range(h):
        for x in range(w):
            out[y, x] = any(
                0 <= x + dx < w and 0 <= y + dy < h and mask[y + dy, x + dx]
                for dx, dy in se.offsets
            )
    return out


def gradient_bf(img: np.ndarray) -> np.ndarray:
    h, w = img.shape
    out = np.zeros_like(img, dtype=np.float64)
    for y in range(h):
        for x in range(w):
            window = [
                img[min(max(y + dy, 0), h - 1), min(max(x + dx, 0), w - 1)]
                for dy in (-1, 0, 1)
                for dx in (-1, 0, 1)
            ]
            out[y, x] = max(window) - min(window)
    return out


class TestDiskSe:
    def test_radius_one(self):
        se = disk_se(1)
        assert set(se.offsets) == {(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)}

    def test_radius_two(self):
        expected = {
            (dx, dy)
            for dx in range(-2, 3)
            for dy in range(-2, 3)
            if dx * dx + dy * dy <= 4
        }
        assert set(DISK2.offsets) == expected
        assert len(DISK2) == 13

    def test_radius_three_count(self):
        assert len(disk_se(3)) == 29

    def test_invalid_radius(self):
        with pytest.raises(ValueError):
            disk_se(0)

    def test_element_validation(self):
        with pytest.raises(ValueError, match="anchor"):
            StructuringElement(((1, 0), (-1, 0)))
        with pytest.raises(ValueError, match="symmetric"):
            StructuringElement(((0, 0), (1, 0)))


class TestErode:
    def test_empty_mask(self, backend):
        mask = np.zeros((9, 9), dtype=bool)
        assert not binary_erode(mask, DISK2).any()

    def test_full_7x7_leaves_center_block(self, backend):
        mask = np.ones((7, 7), dtype=bool)
        got = binary_erode(mask, DISK2)
        expected = np.zeros((7, 7), dtype=bool)
        expected[2:5, 2:5] = True
        assert np.array_equal(got, expected)
        assert np.array_equal(got, erode_bf(mask, DISK2))

    def test_single_pixel_vanishes(self, backend):
        mask = np.zeros((7, 7), dtype=bool)
        mask[3, 3] = True
        assert not binary_erode(mask, DISK2).any()


class TestDilate:
    def test_empty_mask(self, backend):
        assert not binary_dilate(np.zeros((6, 6), dtype=bool), DISK2).any()

    def test_single_pixel_grows_to_disk(self, backend):
        mask = np.zeros((7, 7), dtype=bool)
        mask[3, 3] = True
        got = binary_dilate(mask, DISK2)
        assert int(got.sum()) == 13
        assert np.array_equal(got, dilate_bf(mask, DISK2))

    def test_full_mask_stays_full(self, backend):
        mask = np.ones((5, 8), dtype=bool)
        assert binary_dilate(mask, DISK2).all()


class TestOpen:
    def test_structures_smaller_than_disk_vanish(self, backend, rng):
        mask = np.zeros((16, 16), dtype=bool)
        # scattered singletons and a 2x2 block, all below the disk size
        mask[2, 2] = mask[10, 5] = True
        mask[6:8, 12:14] = True
        assert not binary_open(mask, DISK2).any()

    def test_full_7x7_loses_corner_clusters(self, backend):
        mask = np.ones((7, 7), dtype=bool)
        got = binary_open(mask, DISK2)
        expected = dilate_bf(erode_bf(mask, DISK2), DISK2)
        assert np.array_equal(got, expected)
        # the only pixels removed sit at lattice distance > 2 from the
        # eroded 3x3 center block: three per corner
        removed = {(0, 0), (0, 1), (1, 0), (0, 6), (0, 5), (1, 6),
                   (6, 0), (5, 0), (6, 1), (6, 6), (6, 5), (5, 6)}
        assert {(y, x) for y, x in zip(*np.nonzero(~got))} == removed

    def test_idempotent_on_random_masks(self, backend, rng):
        for _ in range(20):
            mask = rng.random((64, 64)) < rng.uniform(0.2, 0.8)
            opened = binary_open(mask, DISK2)
            assert np.array_equal(binary_open(opened, DISK2), opened)

    def test_matches_brute_force(self, backend, rng):
        for _ in range(25):
            mask = rng.random((16, 16)) < rng.uniform(0.3, 0.9)
            assert np.array_equal(binary_erode(mask, DISK2), erode_bf(mask, DISK2))
            assert np.array_equal(binary_dilate(mask, DISK2), dilate_bf(mask, DISK2))
            assert np.array_equal(binary_open(mask, DISK2), dilate_bf(erode_bf(mask, DISK2), DISK2))

    def test_other_radii_match_brute_force(self, backend, rng):
        for radius in (1, 3):
            se = disk_se(radius)
            mask = rng.random((12, 12)) < 0.6
            assert np.array_equal(binary_erode(mask, se), erode_bf(mask, se))
            assert np.array_equal(binary_dilate(mask, se), dilate_bf(mask, se))

    def test_lattice_properties(self, backend, rng):
        for _ in range(10):
            m1 = rng.random((32, 32)) < 0.5
            m2 = m1 | (rng.random((32, 32)) < 0.2)
            eroded, dilated = binary_erode(m1, DISK2), binary_dilate(m1, DISK2)
            opened = binary_open(m1, DISK2)
            assert not (opened & ~m1).any()  # anti-extensive
            assert not (eroded & ~m1).any() and not (m1 & ~dilated).any()
            assert not (binary_open(m1, DISK2) & ~binary_open(m2, DISK2)).any()  # monotone


class TestGradient:
    def test_constant_plane_is_flat(self, backend):
        plane = np.full((10, 13), 77.0)
        assert (gray_gradient(plane) == 0.0).all()

    def test_center_spike(self, backend):
        plane = np.zeros((5, 5))
        plane[2, 2] = 255.0
        got = gray_gradient(plane)
        expected = np.zeros((5, 5))
        expected[1:4, 1:4] = 255.0
        assert np.array_equal(got, expected)

    def test_single_pixel_plane(self, backend):
        assert gray_gradient(np.array([[42.0]]))[0, 0] == 0.0

    def test_matches_brute_force(self, backend, rng):
        for _ in range(10):
            h, w = rng.integers(1, 20, 2)
            plane = rng.uniform(0, 255, (int(h), int(w)))
            assert np.array_equal(gray_gradient(plane), gradient_bf(plane))

    def test_non_negative(self, backend, rng):
        plane = rng.uniform(0, 255, (24, 24))
        assert (gray_gradient(plane) >= 0.0).all()


@settings(max_examples=40, deadline=None)
@given(arrays(np.bool_, (12, 12), elements=st.booleans()))
def test_opening_is_anti_extensive_and_idempotent(mask):
    opened = binary_open(mask, DISK2)
    assert not (opened & ~mask).any()
    assert np.array_equal(binary_open(opened, DISK2), opened)
