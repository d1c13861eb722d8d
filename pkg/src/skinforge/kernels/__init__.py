"""Kernel backend selection.

The compiled extension is preferred when it imported cleanly; the numpy
fallback is always available. Both expose the same functions and produce
bit-identical results. Set ``SKINFORGE_KERNELS=fallback`` or ``=compiled``
to force a choice (forcing an unavailable backend raises at import).
"""

from __future__ import annotations

import os

from . import _fallback

try:
    from . import _core
except ImportError:  # extension not built
    _core = None  # type: ignore[assignment]

_FUNCTIONS = (
    "gray_plane",
    "yiq_plane",
    "rgb_plane",
    "raw_mask",
    "gradient_full",
    "gradient_rows",
    "erode_full",
    "dilate_full",
    "erode_window",
    "dilate_window",
    "adjust_plane",
)


def available_backends() -> tuple[str, ...]:
    return ("compiled", "fallback") if _core is not None else ("fallback",)


def get_backend(name: str):
    """Return the backend module for ``name`` ('compiled' or 'fallback')."""
    if name == "fallback":
        return _fallback
    if name == "compiled":
        if _core is None:
            raise ImportError("compiled kernels are not available in this install")
        return _core
    raise ValueError(f"unknown kernel backend {name!r}")


def _select() -> object:
    forced = os.environ.get("SKINFORGE_KERNELS", "").strip().lower()
    if forced:
        return get_backend(forced)
    return _core if _core is not None else _fallback


_active = _select()
BACKEND = _active.NAME


def set_backend(name: str) -> None:
    """Switch the process-wide backend (mainly for tests and benchmarks)."""
    global _active, BACKEND
    _active = get_backend(name)
    BACKEND = _active.NAME
    for fn in _FUNCTIONS:
        globals()[fn] = getattr(_active, fn)


for _fn in _FUNCTIONS:
    globals()[_fn] = getattr(_active, _fn)
del _fn
