"""Contrast enhancement: channel fusion and in-place window sharpening.

Both operations share one idea: push every value to the nearer of two
extremes. ``channel_fuse`` does it per pixel across the three color
channels; ``sharpen`` does it spatially, rewriting whole windows while a
small window sweeps the image in raster order.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .validation import check_gray, check_rgb, check_window

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    njit = None


class DegenerateImageWarning(UserWarning):
    """Emitted when an operation degenerates (e.g. image smaller than the
    window) and the input is passed through unchanged."""


def channel_fuse(frame) -> np.ndarray:
    """Collapse an RGB frame to one channel by snapping to a channel extreme.

    For each pixel, let Max and Min be the largest and smallest of the three
    channel values and Third the remaining one. The output is Max when Third
    is at least as close to Max as to Min, otherwise Min. Ties go to Max.
    Equal channels reproduce the grayscale value unchanged.
    """
    frame = check_rgb(frame)
    wide = frame.astype(np.int16)
    mx = wide.max(axis=2)
    mn = wide.min(axis=2)
    third = wide.sum(axis=2) - mx - mn
    pick_max = (mx - third) <= (third - mn)
    return np.where(pick_max, mx, mn).astype(np.uint8)


def _sweep(img, win):
    # One full raster-order sweep, updating in place so that every window
    # position sees the writes of all earlier positions.
    h, w = img.shape
    for y in range(h - win + 1):
        for x in range(w - win + 1):
            mx = img[y, x]
            mn = img[y, x]
            for j in range(win):
                for i in range(win):
                    v = img[y + j, x + i]
                    if v > mx:
                        mx = v
                    if v < mn:
                        mn = v
            for j in range(win):
                for i in range(win):
                    v = img[y + j, x + i]
                    if mx - v <= v - mn:
                        img[y + j, x + i] = mx
                    else:
                        img[y + j, x + i] = mn
    return img


if njit is not None:
    _sweep_fast = njit(cache=True)(_sweep)
else:  # pragma: no cover
    _sweep_fast = _sweep


def sharpen(img, win: int = 3, passes: int = 1) -> np.ndarray:
    """Sharpen by snapping window contents to the nearer window extreme.

    A ``win`` x ``win`` window sweeps the image in raster order with step 1,
    staying fully inside the image. At each position the current window
    maximum and minimum are found and every pixel of the window is rewritten
    to whichever extreme it is closer to (ties to the maximum). Updates land
    in the working image immediately, so later window positions see them.
    ``passes`` repeats the whole sweep.

    An image smaller than the window in either dimension is returned
    unchanged with a ``DegenerateImageWarning``.
    """
    img = check_gray(img)
    win = check_window(win)
    if passes < 1:
        raise ValueError(f"passes must be >= 1, got {passes}")
    h, w = img.shape
    if h < win or w < win:
        warnings.warn(
            f"image {w}x{h} smaller than window {win}; returned unchanged",
            DegenerateImageWarning,
            stacklevel=2,
        )
        return img.copy()
    work = img.astype(np.int32)
    for _ in range(passes):
        _sweep_fast(work, win)
    return work.astype(np.uint8)


@dataclass
class SharpenTrace:
    """Sharpening result plus one snapshot per window position.

    ``snapshots[k]`` is the full image immediately after the k-th window
    position was rewritten; the last snapshot equals ``result``. With
    multiple passes the snapshots of all sweeps are concatenated.
    """

    result: np.ndarray
    window: int
    passes: int
    snapshots: list = field(default_factory=list)


def sharpen_trace(img, win: int = 3, passes: int = 1) -> SharpenTrace:
    """Like :func:`sharpen` but records a snapshot after every window
    position. Intended for small images; snapshots are full copies."""
    img = check_gray(img)
    win = check_window(win)
    if passes < 1:
        raise ValueError(f"passes must be >= 1, got {passes}")
    h, w = img.shape
    if h < win or w < win:
        warnings.warn(
            f"image {w}x{h} smaller than window {win}; returned unchanged",
            DegenerateImageWarning,
            stacklevel=2,
        )
        return SharpenTrace(result=img.copy(), window=win, passes=passes)
    work = img.astype(np.int32)
    snapshots = []
    for _ in range(passes):
        for y in range(h - win + 1):
            for x in range(w - win + 1):
                block = work[y : y + win, x : x + win]
                mx = int(block.max())
                mn = int(block.min())
                snap = np.where((mx - block) <= (block - mn), mx, mn)
                block[:, :] = snap
                snapshots.append(work.astype(np.uint8))
    return SharpenTrace(
        result=work.astype(np.uint8), window=win, passes=passes, snapshots=snapshots
    )
