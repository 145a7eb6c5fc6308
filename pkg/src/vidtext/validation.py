"""Input validation helpers shared by the functional layer and the estimators.

Arrays are validated once at API boundaries and assumed clean inside kernels.
"""
from __future__ import annotations

import numpy as np


def check_rgb(frame) -> np.ndarray:
    """Coerce *frame* to a (H, W, 3) uint8 array or raise ``ValueError``."""
    arr = np.asarray(frame)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"expected an (H, W, 3) RGB array, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError("empty image")
    return _as_uint8(arr)


def check_gray(img) -> np.ndarray:
    """Coerce *img* to a (H, W) uint8 array or raise ``ValueError``."""
    arr = np.asarray(img)
    if arr.ndim != 2:
        raise ValueError(f"expected an (H, W) grayscale array, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError("empty image")
    return _as_uint8(arr)


def check_mask(mask) -> np.ndarray:
    """Coerce *mask* to a (H, W) bool array or raise ``ValueError``."""
    arr = np.asarray(mask)
    if arr.ndim != 2:
        raise ValueError(f"expected an (H, W) mask, got shape {arr.shape}")
    if arr.dtype == bool:
        return arr
    if np.issubdtype(arr.dtype, np.integer):
        bad = (arr != 0) & (arr != 1) & (arr != 255)
        if bad.any():
            raise ValueError("mask values must be 0/1 (or 0/255)")
        return arr != 0
    raise ValueError(f"mask dtype must be bool or integer, got {arr.dtype}")


def check_window(win: int) -> int:
    """Validate a square sliding-window size: an odd integer >= 3."""
    if not isinstance(win, (int, np.integer)):
        raise ValueError(f"window size must be an integer, got {win!r}")
    win = int(win)
    if win < 3 or win % 2 == 0:
        raise ValueError(f"window size must be odd and >= 3, got {win}")
    return win


def _as_uint8(arr: np.ndarray) -> np.ndarray:
    if arr.dtype == np.uint8:
        return arr
    if np.issubdtype(arr.dtype, np.integer) or arr.dtype == bool:
        if arr.min() < 0 or arr.max() > 255:
            raise ValueError("intensity values must lie in [0, 255]")
        return arr.astype(np.uint8)
    raise ValueError(
        f"intensities must be 8-bit integers, got dtype {arr.dtype}"
    )
