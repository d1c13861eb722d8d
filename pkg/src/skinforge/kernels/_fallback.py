"""Numpy implementations of the per-plane kernels.

This is the fallback backend used when the compiled extension is not
available. Floating-point expressions are written in exactly the same
order as in ``colorspace.py`` and in the compiled backend: every value
must come out bit-identical regardless of which backend ran.
"""

from __future__ import annotations

import numpy as np

NAME = "fallback"


def _channels(rgb: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    return (
        rgb[..., 0].astype(np.float64),
        rgb[..., 1].astype(np.float64),
        rgb[..., 2].astype(np.float64),
    )


def gray_plane(rgb: np.ndarray) -> np.ndarray:
    r, g, b = _channels(rgb)
    return 0.299 * r + 0.587 * g + 0.114 * b


def yiq_plane(rgb: np.ndarray) -> np.ndarray:
    r, g, b = _channels(rgb)
    out = np.empty(rgb.shape[:2] + (3,), dtype=np.float64)
    out[..., 0] = 0.299 * r + 0.587 * g + 0.114 * b
    out[..., 1] = 0.596 * r - 0.274 * g - 0.322 * b
    out[..., 2] = 0.212 * r - 0.523 * g + 0.311 * b
    return out


def _round_half_away(x: np.ndarray) -> np.ndarray:
    return np.where(x >= 0.0, np.floor(x + 0.5), np.ceil(x - 0.5))


def rgb_plane(yiq: np.ndarray, inv: np.ndarray) -> np.ndarray:
    y, i, q = yiq[..., 0], yiq[..., 1], yiq[..., 2]
    out = np.empty(yiq.shape[:2] + (3,), dtype=np.uint8)
    for c in range(3):
        v = inv[c, 0] * y + inv[c, 1] * i + inv[c, 2] * q
        out[..., c] = np.clip(_round_half_away(v), 0.0, 255.0).astype(np.uint8)
    return out


def raw_mask(rgb: np.ndarray, grad: np.ndarray, params: np.ndarray) -> np.ndarray:
    (sum_lo, sum_hi, cg_lo, cg_hi, i_lo, i_hi, q_lo, q_hi,
     dark, bright, threshold) = params
    r, g, b = _channels(rgb)

    i = 0.596 * r - 0.274 * g - 0.322 * b
    q = 0.212 * r - 0.523 * g + 0.311 * b
    iq_ok = (i >= i_lo) & (i <= i_hi) & (q >= q_lo) & (q <= q_hi)

    rn = r / 255.0
    gn = g / 255.0
    bn = b / 255.0
    cg = 128.0 + (-81.085 * rn + 112.0 * gn - 30.915 * bn)
    cr = 128.0 + (112.0 * rn - 93.786 * gn - 18.214 * bn)
    s = cg + cr
    cgcr_ok = (cg >= cg_lo) & (cg <= cg_hi) & (s >= sum_lo) & (s <= sum_hi)

    all_dark = (r < dark) & (g < dark) & (b < dark)
    sub_bright = (r < bright) & (g < bright) & (b < bright)
    ordered = (r > g) & (g > b)
    heuristic = all_dark | (sub_bright & ~ordered)

    texture = (grad > threshold) | heuristic
    return iq_ok & cgcr_ok & ~texture


def gradient_full(gray: np.ndarray) -> np.ndarray:
    # 3x3 window max minus min; replicate-edge borders. Max/min separate
    # into vertical then horizontal passes.
    p = np.pad(gray, 1, mode="edge")
    vmax = np.maximum(np.maximum(p[:-2, :], p[1:-1, :]), p[2:, :])
    vmin = np.minimum(np.minimum(p[:-2, :], p[1:-1, :]), p[2:, :])
    hmax = np.maximum(np.maximum(vmax[:, :-2], vmax[:, 1:-1]), vmax[:, 2:])
    hmin = np.minimum(np.minimum(vmin[:, :-2], vmin[:, 1:-1]), vmin[:, 2:])
    return hmax - hmin


def gradient_rows(above: np.ndarray, cur: np.ndarray, below: np.ndarray) -> np.ndarray:
    vmax = np.maximum(np.maximum(above, cur), below)
    vmin = np.minimum(np.minimum(above, cur), below)
    pmax = np.pad(vmax, 1, mode="edge")
    pmin = np.pad(vmin, 1, mode="edge")
    hmax = np.maximum(np.maximum(pmax[:-2], pmax[1:-1]), pmax[2:])
    hmin = np.minimum(np.minimum(pmin[:-2], pmin[1:-1]), pmin[2:])
    return hmax - hmin


def _shifted(mask: np.ndarray, dx: int, dy: int) -> np.ndarray:
    """out[y, x] = mask[y + dy, x + dx]; out-of-bounds reads are False."""
    h, w = mask.shape
    out = np.zeros_like(mask)
    y0, y1 = max(0, -dy), min(h, h - dy)
    x0, x1 = max(0, -dx), min(w, w - dx)
    if y0 < y1 and x0 < x1:
        out[y0:y1, x0:x1] = mask[y0 + dy:y1 + dy, x0 + dx:x1 + dx]
    return out


def _shifted_row(row: np.ndarray, dx: int) -> np.ndarray:
    w = row.shape[0]
    out = np.zeros_like(row)
    x0, x1 = max(0, -dx), min(w, w - dx)
    if x0 < x1:
        out[x0:x1] = row[x0 + dx:x1 + dx]
    return out


def erode_full(mask: np.ndarray, offsets: np.ndarray) -> np.ndarray:
    out = np.ones_like(mask)
    for dx, dy in offsets:
        out &= _shifted(mask, int(dx), int(dy))
    return out


def dilate_full(mask: np.ndarray, offsets: np.ndarray) -> np.ndarray:
    out = np.zeros_like(mask)
    for dx, dy in offsets:
        out |= _shifted(mask, int(dx), int(dy))
    return out


def erode_window(window: np.ndarray, offsets: np.ndarray) -> np.ndarray:
    """Erosion of the window's center row; window rows span dy in [-ry, ry]."""
    ry = window.shape[0] // 2
    out = np.ones(window.shape[1], dtype=bool)
    for dx, dy in offsets:
        out &= _shifted_row(window[ry + int(dy)], int(dx))
    return out


def dilate_window(window: np.ndarray, offsets: np.ndarray) -> np.ndarray:
    ry = window.shape[0] // 2
    out = np.zeros(window.shape[1], dtype=bool)
    for dx, dy in offsets:
        out |= _shifted_row(window[ry + int(dy)], int(dx))
    return out


def adjust_plane(yiq: np.ndarray, mask: np.ndarray, fi: float, fq: float) -> np.ndarray:
    out = yiq.copy()
    i = yiq[..., 1]
    q = yiq[..., 2]
    out[..., 1] = np.where(mask, i + i * fi, i)
    out[..., 2] = np.where(mask, q + q * fq, q)
    return out
