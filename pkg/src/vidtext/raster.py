"""Image containers and file codecs.

Conventions used everywhere in this package:

* images are numpy arrays in row-major order, indexed ``arr[y, x]``;
* ``(x=0, y=0)`` is the top-left pixel, x grows rightward, y downward;
* color frames are ``(H, W, 3)`` uint8 RGB, grayscale images ``(H, W)``
  uint8, masks ``(H, W)`` bool;
* intensities are 8-bit; only gradient responses use floats.

The binary PPM (P6) and PGM (P5) codecs are implemented here so that
round-trips are bit-exact and independent of any imaging library. PNG
(8-bit RGB or grayscale only) is supported behind the same interface via
Pillow. Arrays returned by loaders are fresh and owned by the caller;
treat images passed between stages as immutable.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .validation import check_gray, check_rgb

_PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


class ImageFormatError(Exception):
    """Raised when an image file cannot be decoded.

    The message carries the offending path and, where known, the byte
    offset at which decoding failed.
    """

    def __init__(self, message: str, path=None, offset: int | None = None):
        detail = message
        if path is not None:
            detail += f" [file: {path}"
            if offset is not None:
                detail += f", byte offset {offset}"
            detail += "]"
        super().__init__(detail)
        self.path = path
        self.offset = offset


class Point(NamedTuple):
    """Integer pixel coordinate, x rightward, y downward."""

    x: int
    y: int


@dataclass(frozen=True)
class BBox:
    """Axis-aligned box: top-left corner plus positive width and height."""

    x: int
    y: int
    w: int
    h: int

    def __post_init__(self):
        if self.w < 1 or self.h < 1:
            raise ValueError(f"box needs positive extent, got w={self.w} h={self.h}")

    @property
    def right(self) -> int:
        """One past the last column covered."""
        return self.x + self.w

    @property
    def bottom(self) -> int:
        """One past the last row covered."""
        return self.y + self.h

    @property
    def area(self) -> int:
        return self.w * self.h

    def contains(self, x: int, y: int) -> bool:
        return self.x <= x < self.right and self.y <= y < self.bottom

    def intersection_area(self, other: "BBox") -> int:
        iw = min(self.right, other.right) - max(self.x, other.x)
        ih = min(self.bottom, other.bottom) - max(self.y, other.y)
        if iw <= 0 or ih <= 0:
            return 0
        return iw * ih

    def union(self, other: "BBox") -> "BBox":
        x0 = min(self.x, other.x)
        y0 = min(self.y, other.y)
        x1 = max(self.right, other.right)
        y1 = max(self.bottom, other.bottom)
        return BBox(x0, y0, x1 - x0, y1 - y0)

    @staticmethod
    def around(xs, ys) -> "BBox":
        """Tight box around parallel coordinate arrays (must be nonempty)."""
        xs = np.asarray(xs)
        ys = np.asarray(ys)
        if xs.size == 0:
            raise ValueError("cannot bound an empty point set")
        x0 = int(xs.min())
        y0 = int(ys.min())
        return BBox(x0, y0, int(xs.max()) - x0 + 1, int(ys.max()) - y0 + 1)


def load_image(path) -> np.ndarray:
    """Load a PPM/PGM/PNG file as an (H, W, 3) uint8 frame.

    Grayscale sources are replicated across the three channels.
    """
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise ImageFormatError(f"unreadable file: {exc}", path=path) from exc
    if len(data) < 2:
        raise ImageFormatError("truncated payload", path=path, offset=0)
    magic = data[:2]
    if magic == b"P6":
        return _decode_pnm(data, path, channels=3)
    if magic == b"P5":
        gray = _decode_pnm(data, path, channels=1)
        return np.repeat(gray[:, :, np.newaxis], 3, axis=2)
    if data[: len(_PNG_MAGIC)] == _PNG_MAGIC:
        return _decode_png(path)
    raise ImageFormatError(
        f"unsupported format (magic {magic!r})", path=path, offset=0
    )


def load_gray(path) -> np.ndarray:
    """Load a grayscale image as (H, W) uint8.

    Accepts PGM, grayscale PNG, or a color file whose channels are all
    equal; a genuinely colored input raises ``ImageFormatError``.
    """
    frame = load_image(path)
    if (frame[:, :, 0] != frame[:, :, 1]).any() or (
        frame[:, :, 0] != frame[:, :, 2]
    ).any():
        raise ImageFormatError("expected a grayscale image", path=path)
    return frame[:, :, 0].copy()


def save_gray(img, path) -> None:
    """Write a grayscale image as binary PGM (P5), or PNG for .png paths."""
    img = check_gray(img)
    if _is_png_path(path):
        _encode_png(img, path, mode="L")
        return
    h, w = img.shape
    header = b"P5\n" + f"{w} {h} 255\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(img.tobytes())


def save_rgb(frame, path) -> None:
    """Write an RGB frame as binary PPM (P6), or PNG for .png paths."""
    frame = check_rgb(frame)
    if _is_png_path(path):
        _encode_png(frame, path, mode="RGB")
        return
    h, w = frame.shape[:2]
    header = b"P6\n" + f"{w} {h} 255\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(frame.tobytes())


def save_mask(mask, path) -> None:
    """Write a bool mask as a 0/255 grayscale image."""
    mask = np.asarray(mask, dtype=bool)
    save_gray(mask.astype(np.uint8) * 255, path)


def _is_png_path(path) -> bool:
    return os.fspath(path).lower().endswith(".png")


def _decode_pnm(data: bytes, path, channels: int) -> np.ndarray:
    tokens, payload_start = _pnm_header_tokens(data, path)
    (width, w_off), (height, _), (maxval, mv_off) = tokens
    if width < 1 or height < 1:
        raise ImageFormatError(
            f"bad dimensions {width}x{height}", path=path, offset=w_off
        )
    if maxval != 255:
        raise ImageFormatError(
            f"unsupported bit depth (maxval {maxval}, want 255)",
            path=path,
            offset=mv_off,
        )
    expected = width * height * channels
    payload = data[payload_start : payload_start + expected]
    if len(payload) < expected:
        raise ImageFormatError(
            f"truncated payload: expected {expected} bytes, found {len(payload)}",
            path=path,
            offset=payload_start,
        )
    arr = np.frombuffer(payload, dtype=np.uint8)
    if channels == 1:
        return arr.reshape(height, width).copy()
    return arr.reshape(height, width, channels).copy()


def _pnm_header_tokens(data: bytes, path):
    """Parse the three integer header tokens after the magic.

    Whitespace runs and ``#`` comment lines are tolerated between tokens;
    exactly one whitespace byte separates the maxval from the payload.
    """
    pos = 2
    tokens: list[tuple[int, int]] = []
    while len(tokens) < 3:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos] == ord("#"):
            while pos < len(data) and data[pos] not in b"\r\n":
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        token = data[start:pos]
        if not token:
            raise ImageFormatError("truncated payload", path=path, offset=start)
        try:
            value = int(token)
        except ValueError:
            raise ImageFormatError(
                f"bad header token {token!r}", path=path, offset=start
            ) from None
        tokens.append((value, start))
    if pos >= len(data) or not data[pos : pos + 1].isspace():
        raise ImageFormatError(
            "missing whitespace after header", path=path, offset=pos
        )
    return tokens, pos + 1


def _decode_png(path) -> np.ndarray:
    from PIL import Image

    try:
        with Image.open(path) as im:
            mode = im.mode
            if mode == "RGB":
                return np.asarray(im, dtype=np.uint8).copy()
            if mode == "L":
                gray = np.asarray(im, dtype=np.uint8)
                return np.repeat(gray[:, :, np.newaxis], 3, axis=2)
    except ImageFormatError:
        raise
    except Exception as exc:
        raise ImageFormatError(f"undecodable PNG: {exc}", path=path) from exc
    raise ImageFormatError(
        f"unsupported PNG mode {mode!r} (want 8-bit RGB or grayscale)", path=path
    )


def _encode_png(arr: np.ndarray, path, mode: str) -> None:
    from PIL import Image

    Image.fromarray(arr, mode=mode).save(path, format="PNG")
