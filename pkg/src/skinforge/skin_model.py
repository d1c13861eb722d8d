"""Per-pixel skin/non-skin classification.

Two chroma-plane membership tests (a Cg-Cr band crossed with a Cg interval,
and an I-Q box), RGB heuristics plus a gradient threshold for texture
rejection, and their AND combination.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

from .colorspace import RgbPixel, YCgCrPixel, YiqPixel, rgb_to_ycgcr, rgb_to_yiq

_INT_FIELDS = {"dark_limit", "bright_limit"}


@dataclass(frozen=True)
class SkinModelParams:
    """Bounds for the skin-color models and the texture threshold.

    All chroma intervals are closed. ``gradient_threshold`` is compared
    strictly (a pixel is textured when its gradient exceeds the threshold).
    """

    cgcr_sum_lo: float = 260.0
    cgcr_sum_hi: float = 280.0
    cg_lo: float = 85.0
    cg_hi: float = 135.0
    i_lo: float = 15.0
    i_hi: float = 90.0
    q_lo: float = -20.0
    q_hi: float = 10.0
    dark_limit: int = 80
    bright_limit: int = 230
    gradient_threshold: float = 24.0

    def __post_init__(self) -> None:
        for lo, hi in (
            ("cgcr_sum_lo", "cgcr_sum_hi"),
            ("cg_lo", "cg_hi"),
            ("i_lo", "i_hi"),
            ("q_lo", "q_hi"),
            ("dark_limit", "bright_limit"),
        ):
            if not getattr(self, lo) < getattr(self, hi):
                raise ValueError(f"{lo} must be < {hi}")
        if self.gradient_threshold < 0:
            raise ValueError("gradient_threshold must be >= 0")

    def to_config_text(self) -> str:
        """Serialize as flat ``key=value`` lines, one per field."""
        lines = []
        for f in fields(self):
            value = getattr(self, f.name)
            lines.append(f"{f.name}={value:g}" if isinstance(value, float) else f"{f.name}={value}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_config_text(cls, text: str) -> "SkinModelParams":
        """Parse ``key=value`` lines; missing keys keep their defaults.

        Blank lines and ``#`` comments are ignored. Unknown keys raise
        ``ValueError``.
        """
        known = {f.name for f in fields(cls)}
        kwargs: dict[str, float | int] = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key = key.strip()
            if not sep or key not in known:
                raise ValueError(f"line {lineno}: unknown or malformed entry {raw!r}")
            try:
                kwargs[key] = int(value) if key in _INT_FIELDS else float(value)
            except ValueError as exc:
                raise ValueError(f"line {lineno}: bad value for {key}: {value.strip()!r}") from exc
        return cls(**kwargs)


DEFAULT_PARAMS = SkinModelParams()


def in_skin_cgcr(p: YCgCrPixel, params: SkinModelParams = DEFAULT_PARAMS) -> bool:
    """True when the pixel's chroma falls inside the Cg-Cr skin region."""
    cg, cr = p[1], p[2]
    return (
        params.cg_lo <= cg <= params.cg_hi
        and params.cgcr_sum_lo <= cg + cr <= params.cgcr_sum_hi
    )


def in_skin_iq(p: YiqPixel, params: SkinModelParams = DEFAULT_PARAMS) -> bool:
    """True when the pixel's chroma falls inside the I-Q skin box."""
    i, q = p[1], p[2]
    return params.i_lo <= i <= params.i_hi and params.q_lo <= q <= params.q_hi


def rgb_nonskin_heuristic(p: RgbPixel, params: SkinModelParams = DEFAULT_PARAMS) -> bool:
    """True for pixels flagged non-skin directly from their RGB values.

    Fires for all-dark pixels, and for sub-bright pixels whose channels are
    not strictly ordered r > g > b.
    """
    r, g, b = p[0], p[1], p[2]
    dark = r < params.dark_limit and g < params.dark_limit and b < params.dark_limit
    sub_bright = r < params.bright_limit and g < params.bright_limit and b < params.bright_limit
    return dark or (sub_bright and not (r > g > b))


def texture_bit(gradient_value: float, p: RgbPixel, params: SkinModelParams = DEFAULT_PARAMS) -> bool:
    """Texture flag: gradient above threshold OR the RGB non-skin heuristic."""
    return gradient_value > params.gradient_threshold or rgb_nonskin_heuristic(p, params)


def classify_pixel(p: RgbPixel, gradient_value: float, params: SkinModelParams = DEFAULT_PARAMS) -> bool:
    """Full per-pixel skin decision: both chroma models pass and no texture."""
    return (
        in_skin_iq(rgb_to_yiq(p), params)
        and in_skin_cgcr(rgb_to_ycgcr(p), params)
        and not texture_bit(gradient_value, p, params)
    )
