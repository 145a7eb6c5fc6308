"""Stroke-width measurement and symmetry verification.

Widths are measured by marching a ray from a pixel across the stroke,
one 8-neighbor step at a time, while the ray stays inside the text mask.
The march direction comes from the Sobel gradient at the origin pixel,
quantized to the nearest of the 8 compass directions. Uniform strokes
measure the same dominant width from both sides of the stroke; that
symmetry is the acceptance test for a candidate component.
"""
from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .morphology import CandidateSet, Component
from .raster import Point
from .validation import check_gray, check_mask

log = logging.getLogger(__name__)

# Compass steps indexed by octant of the angle, y growing downward.
_COMPASS = (
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
    (0, -1),
    (1, -1),
)

#: Fraction of a component's weakest-gradient pixels excluded from
#: sampling; interior pixels of flat strokes carry no usable direction.
MAGNITUDE_PERCENTILE = 25.0

#: Marching directions: across the stroke ("gradient") or along it
#: ("tangent", a quarter turn from the gradient).
RAY_MODES = ("gradient", "tangent")


@dataclass
class GradientField:
    """Sobel responses of a grayscale image.

    ``gx`` responds positively to left-dark/right-bright edges, ``gy`` to
    top-dark/bottom-bright ones. ``direction`` is ``atan2(gy, gx)`` in
    radians, measured with y downward.
    """

    gx: np.ndarray
    gy: np.ndarray
    magnitude: np.ndarray
    direction: np.ndarray


class StrokeSample(NamedTuple):
    origin: Point
    reached: Point
    width: int


@dataclass
class WidthHistogram:
    """1-pixel-wide width bins and the modal width (ties to the smaller)."""

    bins: dict
    dominant: int


def sobel(img) -> GradientField:
    """3x3 Sobel responses with replicated-edge padding.

    Raises ``ValueError`` for images smaller than the kernel.
    """
    img = check_gray(img)
    h, w = img.shape
    if h < 3 or w < 3:
        raise ValueError(f"image {w}x{h} is smaller than the 3x3 Sobel kernel")
    p = np.pad(img.astype(np.float64), 1, mode="edge")
    tl = p[:-2, :-2]
    tc = p[:-2, 1:-1]
    tr = p[:-2, 2:]
    ml = p[1:-1, :-2]
    mr = p[1:-1, 2:]
    bl = p[2:, :-2]
    bc = p[2:, 1:-1]
    br = p[2:, 2:]
    gx = (tr + 2.0 * mr + br) - (tl + 2.0 * ml + bl)
    gy = (bl + 2.0 * bc + br) - (tl + 2.0 * tc + tr)
    return GradientField(
        gx=gx,
        gy=gy,
        magnitude=np.hypot(gx, gy),
        direction=np.arctan2(gy, gx),
    )


def quantize_direction(angle: float) -> tuple[int, int]:
    """Snap an angle (radians, y down) to the nearest compass step."""
    idx = int(round(angle / (math.pi / 4.0))) % 8
    return _COMPASS[idx]


def stroke_width(
    p: Point,
    grad: GradientField,
    mask,
    max_ray: float | None = None,
    ray_mode: str = "gradient",
) -> StrokeSample | None:
    """March a ray from ``p`` across the stroke and count its pixels.

    The ray starts at ``p`` (which must be foreground), steps along the
    quantized gradient direction while it stays on foreground, and stops on
    the last foreground pixel. The width is the number of ray pixels
    including both ends. Returns None when the gradient at ``p`` is zero or
    the ray runs longer than ``max_ray`` (default: a quarter of the larger
    image dimension).

    ``ray_mode="tangent"`` instead marches perpendicular to the gradient,
    along the stroke; the default crosses it.
    """
    mask = check_mask(mask)
    h, w = mask.shape
    x, y = int(p[0]), int(p[1])
    if not (0 <= x < w and 0 <= y < h) or not mask[y, x]:
        raise ValueError(f"({x}, {y}) is not a foreground pixel of the mask")
    if ray_mode not in RAY_MODES:
        raise ValueError(f"ray_mode must be one of {RAY_MODES}, got {ray_mode!r}")
    if grad.magnitude[y, x] == 0.0:
        return None
    if max_ray is None:
        max_ray = max(w, h) / 4.0
    angle = float(grad.direction[y, x])
    if ray_mode == "tangent":
        angle += math.pi / 2.0
    dx, dy = quantize_direction(angle)
    cx, cy = x, y
    width = 1
    while True:
        nx, ny = cx + dx, cy + dy
        if not (0 <= nx < w and 0 <= ny < h) or not mask[ny, nx]:
            break
        cx, cy = nx, ny
        width += 1
        if width > max_ray:
            return None
    return StrokeSample(origin=Point(x, y), reached=Point(cx, cy), width=width)


def dominant_width(samples) -> WidthHistogram:
    """Histogram sample widths in 1-pixel bins; modal ties go smaller."""
    samples = list(samples)
    if not samples:
        raise ValueError("no stroke samples to histogram")
    bins = Counter(s.width for s in samples)
    best = max(bins.values())
    dominant = min(wd for wd, n in bins.items() if n == best)
    return WidthHistogram(bins=dict(sorted(bins.items())), dominant=dominant)


def component_samples(
    component: Component,
    grad: GradientField,
    mask,
    max_ray: float | None = None,
    ray_mode: str = "gradient",
) -> list[StrokeSample]:
    """Stroke samples originating at a component's usable pixels.

    Usable pixels have gradient magnitude at or above the component's 25th
    magnitude percentile; rays that return None are dropped.
    """
    xs = component.pixels[:, 0]
    ys = component.pixels[:, 1]
    mags = grad.magnitude[ys, xs]
    floor = np.percentile(mags, MAGNITUDE_PERCENTILE)
    samples = []
    for x, y, m in zip(xs, ys, mags):
        if m < floor:
            continue
        s = stroke_width(Point(int(x), int(y)), grad, mask, max_ray, ray_mode)
        if s is not None:
            samples.append(s)
    return samples


def symmetry_widths(
    component: Component,
    grad: GradientField,
    mask,
    max_ray: float | None = None,
    ray_mode: str = "gradient",
) -> tuple[int | None, int | None]:
    """Dominant widths from the component's pixels and from the pixels
    those rays reached. Either side can be None when it yields no samples.
    """
    first = component_samples(component, grad, mask, max_ray, ray_mode)
    if not first:
        return None, None
    d1 = dominant_width(first).dominant
    reached = list(dict.fromkeys(s.reached for s in first))
    second = []
    for r in reached:
        s = stroke_width(r, grad, mask, max_ray, ray_mode)
        if s is not None:
            second.append(s)
    if not second:
        return d1, None
    return d1, dominant_width(second).dominant


def symmetry_verify(
    component: Component,
    grad: GradientField,
    mask,
    tol: float = 0,
    max_ray: float | None = None,
    ray_mode: str = "gradient",
) -> bool:
    """True when both sides of the stroke agree on the dominant width.

    A component yielding no valid samples on either side fails (with a
    debug diagnostic); degenerate shapes have no stroke to verify.
    """
    d1, d2 = symmetry_widths(component, grad, mask, max_ray, ray_mode)
    if d1 is None or d2 is None:
        log.debug(
            "component %d: no valid stroke samples (d1=%s, d2=%s)",
            component.id,
            d1,
            d2,
        )
        return False
    return abs(d1 - d2) <= tol


def text_representatives(
    cands: CandidateSet,
    enhanced,
    tol: float = 0,
    max_ray: float | None = None,
    ray_mode: str = "gradient",
) -> list[Component]:
    """Filter candidates down to those passing stroke-width symmetry.

    The gradient is taken from the enhanced image; rays march inside the
    candidate set's text mask. Order is preserved.
    """
    enhanced = check_gray(enhanced)
    grad = sobel(enhanced)
    mask = check_mask(cands.mask)
    return [
        c
        for c in cands.candidates
        if symmetry_verify(c, grad, mask, tol, max_ray, ray_mode)
    ]
