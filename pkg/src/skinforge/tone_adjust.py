"""User-configurable skin-tone adjustment.

The adjustment strength per chroma axis is held in a signed 16-bit Q15
register: value = register / 32768, so the range covers [-100%, +100%)
with +100% saturating at 32767. Adjustment multiplies I and Q by
(1 + range) on skin pixels only; luminance is never touched.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import kernels
from .colorspace import YiqPixel, round_half_away

Q15_SCALE = 32768
Q15_MIN = -32768
Q15_MAX = 32767


def _check_q15(value: int, name: str) -> int:
    value = int(value)
    if not Q15_MIN <= value <= Q15_MAX:
        raise ValueError(f"{name} must be a signed 16-bit value, got {value}")
    return value


@dataclass(frozen=True)
class AdjustRegisters:
    i_range_q15: int = 0
    q_range_q15: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "i_range_q15", _check_q15(self.i_range_q15, "i_range_q15"))
        object.__setattr__(self, "q_range_q15", _check_q15(self.q_range_q15, "q_range_q15"))


class Direction(Enum):
    RED = "Red"
    YELLOW = "Yellow"
    GREEN = "Green"
    MAGENTA = "Magenta"
    NEUTRAL = "Neutral"


def encode_range(fraction: float) -> int:
    """Quantize a fraction in [-1, 1] to a Q15 register (ties away from zero)."""
    if not -1.0 <= fraction <= 1.0:
        raise ValueError(f"range fraction must lie in [-1, 1], got {fraction}")
    reg = round_half_away(fraction * 32768.0)
    return Q15_MIN if reg < Q15_MIN else Q15_MAX if reg > Q15_MAX else reg


def decode_range(reg: int) -> float:
    """Exact fraction represented by a Q15 register."""
    return _check_q15(reg, "register") / 32768.0


def bit_pattern(reg: int) -> str:
    """16-bit two's-complement bit string of a register."""
    return format(_check_q15(reg, "register") & 0xFFFF, "016b")


def direction_for(regs: AdjustRegisters) -> Direction:
    """Quadrant label for the register signs; any zero axis is Neutral."""
    i, q = regs.i_range_q15, regs.q_range_q15
    if i == 0 or q == 0:
        return Direction.NEUTRAL
    if i > 0:
        return Direction.RED if q > 0 else Direction.YELLOW
    return Direction.MAGENTA if q > 0 else Direction.GREEN


def adjust_pixel(p: YiqPixel, regs: AdjustRegisters) -> YiqPixel:
    """Scale the chroma axes by (1 + range); no clamping here."""
    fi = decode_range(regs.i_range_q15)
    fq = decode_range(regs.q_range_q15)
    i, q = p[1], p[2]
    return YiqPixel(p[0], i + i * fi, q + q * fq)


def apply_adjustment(frame_yiq: np.ndarray, skin: np.ndarray, regs: AdjustRegisters) -> np.ndarray:
    """Adjust masked pixels of a YIQ plane; unmasked pixels are bit-identical.

    ``frame_yiq`` is (H, W, 3) float64, ``skin`` is (H, W) bool.
    """
    yiq = np.ascontiguousarray(frame_yiq, dtype=np.float64)
    mask = np.ascontiguousarray(skin)
    if yiq.ndim != 3 or yiq.shape[2] != 3 or mask.shape != yiq.shape[:2]:
        raise ValueError(
            f"frame {yiq.shape} and mask {mask.shape} dimensions do not match"
        )
    fi = decode_range(regs.i_range_q15)
    fq = decode_range(regs.q_range_q15)
    return kernels.adjust_plane(yiq, mask, fi, fq)


def parse_range(text: str) -> int:
    """Parse a register spelling: a percent ("-18%"), a raw register
    ("q15:-5898"), or a bare number taken as a percent.
    """
    spec = text.strip()
    if spec.lower().startswith("q15:"):
        try:
            return _check_q15(int(spec[4:]), "register")
        except ValueError as exc:
            raise ValueError(f"bad register spec {text!r}: {exc}") from exc
    number = spec[:-1] if spec.endswith("%") else spec
    try:
        percent = float(number)
    except ValueError as exc:
        raise ValueError(f"bad range spec {text!r}") from exc
    if not -100.0 <= percent <= 100.0:
        raise ValueError(f"range percent must lie in [-100, 100], got {percent}")
    return encode_range(percent / 100.0)
