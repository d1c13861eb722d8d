"""Color-space transforms between RGB, YCgCr, and YIQ.

All transforms are plain double-precision arithmetic. RGB inputs are 8-bit
integer channels; YCgCr is computed from channels normalized to [0, 1], YIQ
from the raw [0, 255] channels. Quantization back to integers happens only
in ``yiq_to_rgb``.
"""

from __future__ import annotations

import math
from typing import NamedTuple


class RgbPixel(NamedTuple):
    r: int
    g: int
    b: int


class YCgCrPixel(NamedTuple):
    y: float
    cg: float
    cr: float


class YiqPixel(NamedTuple):
    y: float
    i: float
    q: float


# RGB -> YIQ. The Q row sums to exactly zero (grays map onto the Y axis),
# matching the NTSC convention.
YIQ_FROM_RGB = (
    (0.299, 0.587, 0.114),
    (0.596, -0.274, -0.322),
    (0.212, -0.523, 0.311),
)


def _invert3(m: tuple[tuple[float, float, float], ...]) -> tuple[tuple[float, float, float], ...]:
    """Exact-formula inverse of a 3x3 matrix (adjugate over determinant)."""
    a, b, c = m[0]
    d, e, f = m[1]
    g, h, i = m[2]
    det = a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    return (
        ((e * i - f * h) / det, (c * h - b * i) / det, (b * f - c * e) / det),
        ((f * g - d * i) / det, (a * i - c * g) / det, (c * d - a * f) / det),
        ((d * h - e * g) / det, (b * g - a * h) / det, (a * e - b * d) / det),
    )


RGB_FROM_YIQ = _invert3(YIQ_FROM_RGB)


def round_half_away(x: float) -> int:
    """Round to the nearest integer, ties away from zero."""
    if x >= 0.0:
        return int(math.floor(x + 0.5))
    return int(math.ceil(x - 0.5))


def rgb_to_ycgcr(p: RgbPixel) -> YCgCrPixel:
    """Transform an RGB pixel to YCgCr (green-difference chroma)."""
    rn = p[0] / 255.0
    gn = p[1] / 255.0
    bn = p[2] / 255.0
    y = 16.0 + (65.481 * rn + 128.553 * gn + 24.966 * bn)
    cg = 128.0 + (-81.085 * rn + 112.0 * gn - 30.915 * bn)
    cr = 128.0 + (112.0 * rn - 93.786 * gn - 18.214 * bn)
    return YCgCrPixel(y, cg, cr)


def rgb_to_yiq(p: RgbPixel) -> YiqPixel:
    """Transform an RGB pixel to YIQ on the [0, 255] channel scale."""
    r, g, b = p[0], p[1], p[2]
    y = 0.299 * r + 0.587 * g + 0.114 * b
    i = 0.596 * r - 0.274 * g - 0.322 * b
    q = 0.212 * r - 0.523 * g + 0.311 * b
    return YiqPixel(y, i, q)


def yiq_to_rgb(p: YiqPixel) -> RgbPixel:
    """Invert the YIQ transform; rounds then clamps each channel to [0, 255].

    Total over all real YIQ triples, including out-of-gamut values produced
    by tone adjustment.
    """
    y, i, q = p[0], p[1], p[2]
    channels = []
    for row in RGB_FROM_YIQ:
        v = row[0] * y + row[1] * i + row[2] * q
        n = round_half_away(v)
        channels.append(0 if n < 0 else 255 if n > 255 else n)
    return RgbPixel(*channels)


def rgb_to_gray(p: RgbPixel) -> float:
    """Luminance of an RGB pixel (the Y component of the YIQ transform)."""
    return 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2]
