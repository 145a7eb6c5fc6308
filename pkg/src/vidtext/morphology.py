"""Skeletons, connected components, and loop-bearing candidate selection.

Foreground uses 8-connectivity; the background side of the hole test uses
4-connectivity (the standard dual pairing, so a diagonal foreground ring
cannot leak background through its corners).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .raster import BBox
from .validation import check_mask

log = logging.getLogger(__name__)

_EIGHT = np.ones((3, 3), dtype=int)
_FOUR = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=int)

#: Components smaller than this many pixels are never considered candidates;
#: the smallest pixel loop (a 2x2 block has none, a diagonal ring needs 4+)
#: cannot exist below it, and tiny fragments are noise.
MIN_CANDIDATE_PIXELS = 4


@dataclass(eq=False)
class Component:
    """One 8-connected foreground component.

    ``pixels`` is an (N, 2) int array of (x, y) coordinates in the scan
    order they were found; ``hole_count`` counts enclosed background
    regions.
    """

    id: int
    pixels: np.ndarray
    bbox: BBox
    hole_count: int

    @property
    def size(self) -> int:
        return len(self.pixels)


@dataclass
class CandidateSet:
    """Skeleton components split into loop-bearing candidates and the rest.

    ``mask`` is the text mask the skeleton was thinned from; downstream
    stroke sampling marches rays inside it. Candidates plus rejected
    together are exactly the components of ``skeleton``.
    """

    skeleton: np.ndarray
    mask: np.ndarray
    candidates: list = field(default_factory=list)
    rejected: list = field(default_factory=list)


def skeletonize(mask) -> np.ndarray:
    """Thin a mask to 1-pixel-wide strokes (two-subiteration thinning).

    The result is a subset of the input and a fixed point: thinning a
    skeleton changes nothing.
    """
    mask = check_mask(mask)
    img = np.pad(mask, 1).astype(np.uint8)
    while True:
        changed = False
        for step in (0, 1):
            deletable = _thin_step(img, step)
            if deletable.any():
                img[deletable] = 0
                changed = True
        if not changed:
            break
    return img[1:-1, 1:-1].astype(bool)


def _thin_step(img: np.ndarray, step: int) -> np.ndarray:
    # Neighbors clockwise from north: P2..P9. Border padding guarantees
    # every true pixel has a full neighborhood.
    p2 = np.roll(img, 1, axis=0)
    p3 = np.roll(np.roll(img, 1, axis=0), -1, axis=1)
    p4 = np.roll(img, -1, axis=1)
    p5 = np.roll(np.roll(img, -1, axis=0), -1, axis=1)
    p6 = np.roll(img, -1, axis=0)
    p7 = np.roll(np.roll(img, -1, axis=0), 1, axis=1)
    p8 = np.roll(img, 1, axis=1)
    p9 = np.roll(np.roll(img, 1, axis=0), 1, axis=1)
    ring = [p2, p3, p4, p5, p6, p7, p8, p9]
    neighbors = sum(int(0) + p for p in ring)
    transitions = sum(
        ((ring[i] == 0) & (ring[(i + 1) % 8] == 1)).astype(np.uint8)
        for i in range(8)
    )
    cond = (
        (img == 1)
        & (neighbors >= 2)
        & (neighbors <= 6)
        & (transitions == 1)
    )
    if step == 0:
        cond &= (p2 * p4 * p6 == 0) & (p4 * p6 * p8 == 0)
    else:
        cond &= (p2 * p4 * p8 == 0) & (p2 * p6 * p8 == 0)
    # np.roll wraps; padding keeps the border false so wrap-around cannot
    # mark anything, but clear the frame anyway for safety.
    cond[0, :] = cond[-1, :] = False
    cond[:, 0] = cond[:, -1] = False
    return cond


def label_components(mask) -> list[Component]:
    """Label 8-connected components in scan order, with hole counts."""
    mask = check_mask(mask)
    labeled, count = ndimage.label(mask, structure=_EIGHT)
    comps: list[Component] = []
    slices = ndimage.find_objects(labeled)
    for idx in range(count):
        sl = slices[idx]
        local = labeled[sl] == (idx + 1)
        ys, xs = np.nonzero(local)
        xs = xs + sl[1].start
        ys = ys + sl[0].start
        pixels = np.column_stack([xs, ys]).astype(np.int32)
        comps.append(
            Component(
                id=idx + 1,
                pixels=pixels,
                bbox=BBox.around(xs, ys),
                hole_count=_hole_count(local),
            )
        )
    return comps


def _hole_count(local: np.ndarray) -> int:
    """Count background regions fully enclosed by a component.

    Background is flooded inward from the border of the component's box
    padded by one; 4-connected background regions the flood never reaches
    are holes.
    """
    padded = np.pad(local, 1)
    bg_labels, bg_count = ndimage.label(~padded, structure=_FOUR)
    if bg_count == 0:
        return 0
    border = np.concatenate(
        [
            bg_labels[0, :],
            bg_labels[-1, :],
            bg_labels[:, 0],
            bg_labels[:, -1],
        ]
    )
    outside = set(np.unique(border[border > 0]))
    return int(bg_count - len(outside))


def is_fully_connected(component: Component, skeleton) -> bool:
    """True when the component encloses at least one background hole."""
    skeleton = check_mask(skeleton)
    xs = component.pixels[:, 0]
    ys = component.pixels[:, 1]
    if not skeleton[ys, xs].all():
        raise ValueError("component pixels are not on the given skeleton")
    local = np.zeros((component.bbox.h, component.bbox.w), dtype=bool)
    local[ys - component.bbox.y, xs - component.bbox.x] = True
    return _hole_count(local) >= 1


def text_candidates(mask, min_pixels: int = MIN_CANDIDATE_PIXELS) -> CandidateSet:
    """Thin the text mask and keep skeleton components that enclose a hole.

    Components below ``min_pixels`` are rejected outright. An empty
    candidate list is a legitimate outcome (e.g. a blank frame), not an
    error.
    """
    mask = check_mask(mask)
    skeleton = skeletonize(mask)
    out = CandidateSet(skeleton=skeleton, mask=mask)
    for comp in label_components(skeleton):
        if comp.size >= min_pixels and comp.hole_count >= 1:
            out.candidates.append(comp)
        else:
            out.rejected.append(comp)
    if not out.candidates:
        log.debug("no loop-bearing skeleton components found")
    return out
