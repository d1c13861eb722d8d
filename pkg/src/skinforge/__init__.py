"""Skin detection and user-configurable skin-tone adjustment.

Pixels are classified by intersecting two chroma-space skin models with a
texture filter, the mask is cleaned by a morphological opening, and the
chroma of detected skin is scaled by user-held Q15 registers before
conversion back to RGB.
"""

from .colorspace import (
    RgbPixel,
    YCgCrPixel,
    YiqPixel,
    rgb_to_gray,
    rgb_to_ycgcr,
    rgb_to_yiq,
    yiq_to_rgb,
)
from .imageio import load_image, save_image
from .kernels import BACKEND as KERNEL_BACKEND
from .morphology import (
    StructuringElement,
    binary_dilate,
    binary_erode,
    binary_open,
    disk_se,
    gray_gradient,
)
from .pipeline import (
    BufferProbe,
    PipelineConfig,
    PipelineOutput,
    UnsupportedSizeError,
    detect_oracle,
    pipeline_stats,
    process,
    process_oracle,
    process_streaming,
)
from .skin_model import (
    SkinModelParams,
    classify_pixel,
    in_skin_cgcr,
    in_skin_iq,
    rgb_nonskin_heuristic,
    texture_bit,
)
from .tone_adjust import (
    AdjustRegisters,
    Direction,
    adjust_pixel,
    apply_adjustment,
    bit_pattern,
    decode_range,
    direction_for,
    encode_range,
)

__version__ = "0.1.0"
