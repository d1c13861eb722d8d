"""Image file I/O: binary PPM (P6) and PNG.

PPM is the bit-exact reference format (hand-rolled here, no codec
ambiguity); PNG goes through Pillow. Frames are (H, W, 3) uint8 arrays;
binary masks are (H, W) bool and serialize as white (true) on black.
"""

from __future__ import annotations

import io
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


class ImageParseError(ValueError):
    """Malformed image data; ``offset`` is the failing byte position."""

    def __init__(self, message: str, offset: int | None = None) -> None:
        super().__init__(message if offset is None else f"{message} (byte {offset})")
        self.offset = offset


class UnsupportedFormatError(ValueError):
    pass


def mask_to_rgb(mask: np.ndarray) -> np.ndarray:
    """Render a bool mask as an RGB frame, white for true pixels."""
    m = np.asarray(mask)
    if m.ndim != 2 or m.dtype != np.bool_:
        raise ValueError("mask must be a 2-D bool array")
    return np.where(m[..., None], np.uint8(255), np.uint8(0)).astype(np.uint8)


def _as_rgb(image: np.ndarray) -> np.ndarray:
    arr = np.asarray(image)
    if arr.ndim == 2 and arr.dtype == np.bool_:
        return mask_to_rgb(arr)
    if arr.ndim == 3 and arr.shape[2] == 3 and arr.dtype == np.uint8:
        return np.ascontiguousarray(arr)
    raise ValueError("image must be an (H, W, 3) uint8 frame or an (H, W) bool mask")


class _PpmScanner:
    """Header tokenizer that tracks byte offsets and skips '#' comments."""

    def __init__(self, data: bytes) -> None:
        self.data = data
        self.pos = 0

    def skip_space(self) -> None:
        data, n = self.data, len(self.data)
        while self.pos < n:
            c = self.data[self.pos]
            if c in b"#":
                while self.pos < n and data[self.pos] not in b"\n":
                    self.pos += 1
            elif c in b" \t\r\n\x0b\x0c":
                self.pos += 1
            else:
                return

    def token(self) -> bytes:
        self.skip_space()
        start = self.pos
        data, n = self.data, len(self.data)
        while self.pos < n and data[self.pos] not in b" \t\r\n\x0b\x0c#":
            self.pos += 1
        if self.pos == start:
            raise ImageParseError("unexpected end of PPM header", start)
        return data[start:self.pos]

    def int_token(self, what: str) -> int:
        start = self.pos
        tok = self.token()
        if not tok.isdigit():
            raise ImageParseError(f"bad PPM {what}: {tok!r}", start)
        return int(tok)


def decode_ppm(data: bytes) -> np.ndarray:
    sc = _PpmScanner(data)
    if data[:2] != b"P6":
        raise ImageParseError(f"not a P6 PPM (magic {data[:2]!r})", 0)
    sc.pos = 2
    width = sc.int_token("width")
    height = sc.int_token("height")
    maxval_at = sc.pos
    maxval = sc.int_token("maxval")
    if maxval != 255:
        raise UnsupportedFormatError(f"only maxval 255 PPM is supported, got {maxval}")
    if width < 1 or height < 1:
        raise ImageParseError(f"bad PPM dimensions {width}x{height}", maxval_at)
    if sc.pos >= len(data):
        raise ImageParseError("missing PPM payload", sc.pos)
    sc.pos += 1  # single whitespace byte separates header from payload
    need = width * height * 3
    payload = data[sc.pos:sc.pos + need]
    if len(payload) < need:
        raise ImageParseError(
            f"truncated PPM payload: expected {need} bytes, got {len(payload)}",
            sc.pos + len(payload),
        )
    return np.frombuffer(payload, dtype=np.uint8).reshape(height, width, 3).copy()


def encode_ppm(image: np.ndarray) -> bytes:
    rgb = _as_rgb(image)
    h, w = rgb.shape[:2]
    return b"P6\n%d %d\n255\n" % (w, h) + rgb.tobytes()


def decode_png(data: bytes) -> np.ndarray:
    try:
        img = Image.open(io.BytesIO(data))
        img.load()
    except UnidentifiedImageError as exc:
        raise ImageParseError(f"not a decodable PNG: {exc}", 0) from exc
    except OSError as exc:
        raise ImageParseError(f"corrupt PNG: {exc}", 0) from exc
    if img.mode in ("I", "I;16", "I;16B", "I;16L", "F"):
        raise UnsupportedFormatError(f"unsupported PNG bit depth (mode {img.mode})")
    if img.mode != "RGB":
        img = img.convert("RGB")
    return np.asarray(img, dtype=np.uint8)


def encode_png(image: np.ndarray) -> bytes:
    rgb = _as_rgb(image)
    buf = io.BytesIO()
    Image.fromarray(rgb, mode="RGB").save(buf, format="PNG")
    return buf.getvalue()


def decode_image(data: bytes) -> np.ndarray:
    """Decode PPM-P6 or PNG bytes, sniffing the magic."""
    if data[:2] == b"P6":
        return decode_ppm(data)
    if data[:8] == PNG_MAGIC:
        return decode_png(data)
    raise ImageParseError(f"unrecognized image format (magic {data[:8]!r})", 0)


def load_image(path: str | Path) -> np.ndarray:
    """Load a PPM-P6 or PNG file as an (H, W, 3) uint8 frame."""
    data = Path(path).read_bytes()
    if not data:
        raise ImageParseError(f"{path}: empty file", 0)
    return decode_image(data)


def save_image(image: np.ndarray, path: str | Path, format: str | None = None) -> None:
    """Write a frame or mask; format from the extension unless given."""
    path = Path(path)
    fmt = (format or path.suffix.lstrip(".")).lower()
    if fmt == "ppm":
        path.write_bytes(encode_ppm(image))
    elif fmt == "png":
        path.write_bytes(encode_png(image))
    else:
        raise UnsupportedFormatError(f"unsupported output format {fmt!r}")
