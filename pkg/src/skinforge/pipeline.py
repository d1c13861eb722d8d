"""End-to-end engine: detect skin, adjust tone, convert back to RGB.

Two interchangeable execution paths produce bit-identical output. The
full-frame path applies each stage to whole planes and serves as the
reference; the streaming path makes a single pass over rows holding only
bounded line buffers, mirroring a hardware pipeline's 3-line texture
window, the two cascaded opening windows, and a chroma delay buffer that
keeps adjustment aligned with the opened mask.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .colorspace import RGB_FROM_YIQ
from .morphology import DISK2, StructuringElement
from .skin_model import DEFAULT_PARAMS, SkinModelParams
from .tone_adjust import AdjustRegisters, decode_range

_INV = np.ascontiguousarray(np.array(RGB_FROM_YIQ, dtype=np.float64))

MIN_STREAMING_SIZE = 5


class UnsupportedSizeError(ValueError):
    """Frame too small for the streaming path; use the full-frame path."""


@dataclass(frozen=True)
class PipelineConfig:
    model: SkinModelParams = DEFAULT_PARAMS
    regs: AdjustRegisters = AdjustRegisters()
    opening_se: StructuringElement = DISK2
    emit_mask: bool = True


@dataclass(frozen=True)
class PipelineStats:
    pre_opening: int
    post_opening: int


@dataclass
class PipelineOutput:
    adjusted: np.ndarray
    skin_mask: np.ndarray | None
    stats: PipelineStats


@dataclass
class StagePlanes:
    """Intermediate planes of one full-frame run, for debugging dumps."""

    gradient: np.ndarray
    raw_mask: np.ndarray
    opened_mask: np.ndarray
    adjusted: np.ndarray


class BufferProbe:
    """Counts intermediate rows retained by the streaming engine."""

    def __init__(self) -> None:
        self.rows = 0
        self.peak_rows = 0

    def _add(self) -> None:
        self.rows += 1
        if self.rows > self.peak_rows:
            self.peak_rows = self.rows

    def _drop(self, n: int) -> None:
        self.rows -= n


class _RowStore:
    """Dict-backed row buffer charging a shared probe for every live row."""

    def __init__(self, probe: BufferProbe) -> None:
        self._rows: dict[int, np.ndarray] = {}
        self._probe = probe

    def put(self, idx: int, row: np.ndarray) -> None:
        self._rows[idx] = row
        self._probe._add()

    def get(self, idx: int) -> np.ndarray:
        return self._rows[idx]

    def pop(self, idx: int) -> np.ndarray:
        row = self._rows.pop(idx)
        self._probe._drop(1)
        return row

    def drop_below(self, idx: int) -> None:
        stale = [k for k in self._rows if k < idx]
        for k in stale:
            del self._rows[k]
        self._probe._drop(len(stale))


def _as_frame(frame: np.ndarray) -> np.ndarray:
    f = np.asarray(frame)
    if f.ndim != 3 or f.shape[2] != 3 or f.dtype != np.uint8:
        raise ValueError("frame must be an (H, W, 3) uint8 array")
    if f.shape[0] < 1 or f.shape[1] < 1:
        raise ValueError("frame must be non-empty")
    return np.ascontiguousarray(f)


def _params_vector(m: SkinModelParams) -> np.ndarray:
    return np.array(
        [m.cgcr_sum_lo, m.cgcr_sum_hi, m.cg_lo, m.cg_hi,
         m.i_lo, m.i_hi, m.q_lo, m.q_hi,
         float(m.dark_limit), float(m.bright_limit), m.gradient_threshold],
        dtype=np.float64,
    )


def _detect_planes(frame: np.ndarray, cfg: PipelineConfig) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    gray = kernels.gray_plane(frame)
    gradient = kernels.gradient_full(gray)
    raw = kernels.raw_mask(frame, gradient, _params_vector(cfg.model))
    offs = cfg.opening_se.offset_array
    opened = kernels.dilate_full(kernels.erode_full(raw, offs), offs)
    return gradient, raw, opened


def detect_oracle(frame: np.ndarray, cfg: PipelineConfig = PipelineConfig()) -> np.ndarray:
    """Full-frame skin mask: classify every pixel, then open the result."""
    _, _, opened = _detect_planes(_as_frame(frame), cfg)
    return opened


def process_oracle(frame: np.ndarray, cfg: PipelineConfig = PipelineConfig()) -> PipelineOutput:
    """Full-frame reference path."""
    frame = _as_frame(frame)
    _, raw, opened = _detect_planes(frame, cfg)
    yiq = kernels.yiq_plane(frame)
    adjusted_yiq = kernels.adjust_plane(
        yiq, opened, decode_range(cfg.regs.i_range_q15), decode_range(cfg.regs.q_range_q15)
    )
    adjusted = kernels.rgb_plane(adjusted_yiq, _INV)
    stats = PipelineStats(int(np.count_nonzero(raw)), int(np.count_nonzero(opened)))
    return PipelineOutput(adjusted, opened if cfg.emit_mask else None, stats)


def run_stages(frame: np.ndarray, cfg: PipelineConfig = PipelineConfig()) -> StagePlanes:
    """Full-frame run that keeps every intermediate plane."""
    frame = _as_frame(frame)
    gradient, raw, opened = _detect_planes(frame, cfg)
    yiq = kernels.yiq_plane(frame)
    adjusted_yiq = kernels.adjust_plane(
        yiq, opened, decode_range(cfg.regs.i_range_q15), decode_range(cfg.regs.q_range_q15)
    )
    return StagePlanes(gradient, raw, opened, kernels.rgb_plane(adjusted_yiq, _INV))


def process_streaming(
    frame: np.ndarray,
    cfg: PipelineConfig = PipelineConfig(),
    probe: BufferProbe | None = None,
) -> PipelineOutput:
    """Single-pass row-streaming path; output equals ``process_oracle``.

    Rows flow through four bounded buffers: a 3-row gray window feeding the
    texture gradient, one raw-mask window feeding erosion, one eroded
    window feeding dilation, and a YIQ delay holding exactly the rows in
    flight between ingest and mask-aligned adjustment. Pass a
    ``BufferProbe`` to measure peak retained rows.
    """
    frame = _as_frame(frame)
    h, w = frame.shape[:2]
    if h < MIN_STREAMING_SIZE or w < MIN_STREAMING_SIZE:
        raise UnsupportedSizeError(
            f"streaming path needs at least {MIN_STREAMING_SIZE}x{MIN_STREAMING_SIZE}, got {w}x{h}"
        )

    offs = cfg.opening_se.offset_array
    ry = cfg.opening_se.reach_y
    params = _params_vector(cfg.model)
    fi = decode_range(cfg.regs.i_range_q15)
    fq = decode_range(cfg.regs.q_range_q15)
    if probe is None:
        probe = BufferProbe()

    gray_rows = _RowStore(probe)
    rgb_rows = _RowStore(probe)
    raw_rows = _RowStore(probe)
    eroded_rows = _RowStore(probe)
    yiq_rows = _RowStore(probe)
    false_row = np.zeros(w, dtype=bool)

    adjusted = np.empty_like(frame)
    mask_out = np.empty((h, w), dtype=bool) if cfg.emit_mask else None
    pre = post = 0
    next_raw = next_eroded = next_opened = 0

    def mask_window(store: _RowStore, center: int) -> np.ndarray:
        rows = [
            store.get(j) if 0 <= (j := center + dy) < h else false_row
            for dy in range(-ry, ry + 1)
        ]
        return np.stack(rows)

    for t in range(h):
        row = frame[t:t + 1]
        gray_rows.put(t, kernels.gray_plane(row)[0])
        yiq_rows.put(t, kernels.yiq_plane(row))
        rgb_rows.put(t, row)

        # Texture gradient needs one row of lookahead (replicated at edges),
        # so classification runs one row behind ingest.
        while next_raw < h and min(next_raw + 1, h - 1) <= t:
            g = next_raw
            above = gray_rows.get(g - 1 if g > 0 else 0)
            below = gray_rows.get(g + 1 if g + 1 < h else h - 1)
            grad = kernels.gradient_rows(above, gray_rows.get(g), below)
            raw = kernels.raw_mask(rgb_rows.pop(g), grad[None, :], params)[0]
            pre += int(np.count_nonzero(raw))
            raw_rows.put(g, raw)
            gray_rows.drop_below(g)
            next_raw += 1

        # Erosion sees raw rows (vertical reach of the element ahead);
        # rows beyond the frame act as background.
        while next_eroded < h and min(next_eroded + ry, h - 1) <= next_raw - 1:
            e = next_eroded
            eroded_rows.put(e, kernels.erode_window(mask_window(raw_rows, e), offs))
            raw_rows.drop_below(e - ry + 1)
            next_eroded += 1

        # Dilation completes the opening; the finished mask row releases its
        # delayed YIQ row for adjustment and output conversion.
        while next_opened < h and min(next_opened + ry, h - 1) <= next_eroded - 1:
            o = next_opened
            opened = kernels.dilate_window(mask_window(eroded_rows, o), offs)
            post += int(np.count_nonzero(opened))
            if mask_out is not None:
                mask_out[o] = opened
            adj = kernels.adjust_plane(yiq_rows.pop(o), opened[None, :], fi, fq)
            adjusted[o] = kernels.rgb_plane(adj, _INV)[0]
            eroded_rows.drop_below(o - ry + 1)
            next_opened += 1

    return PipelineOutput(adjusted, mask_out, PipelineStats(pre, post))


def process(
    frame: np.ndarray,
    cfg: PipelineConfig = PipelineConfig(),
    probe: BufferProbe | None = None,
) -> PipelineOutput:
    """Streaming path when the frame is large enough, reference otherwise."""
    frame = _as_frame(frame)
    if min(frame.shape[:2]) >= MIN_STREAMING_SIZE:
        return process_streaming(frame, cfg, probe)
    return process_oracle(frame, cfg)


def pipeline_stats(out: PipelineOutput) -> dict:
    """Summary record for CLI and service reporting."""
    h, w = out.adjusted.shape[:2]
    total = h * w
    return {
        "width": w,
        "height": h,
        "pixels": total,
        "skin_pixels": out.stats.post_opening,
        "coverage": out.stats.post_opening / total,
        "pre_opening": out.stats.pre_opening,
        "post_opening": out.stats.post_opening,
        "removed_by_opening": out.stats.pre_opening - out.stats.post_opening,
    }
