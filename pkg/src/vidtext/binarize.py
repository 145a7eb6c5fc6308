"""Two-cluster intensity binarization.

A deterministic 1-D 2-means over the 256 intensity levels. Centroids are
seeded at the global minimum and maximum, assignment is nearest-centroid
with ties to the lower centroid, and the cluster with the higher final
mean becomes the text (foreground) cluster. Because assignment in one
dimension is a cut between the centroids, the resulting mask is always a
threshold partition of the intensities.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .validation import check_gray


@dataclass
class ClusterResult:
    """Outcome of the 2-means split.

    ``mask`` is True on the text cluster. ``threshold`` is the decision
    boundary actually applied: ``mask == (img > threshold)``. On a constant
    image ``degenerate`` is set, the centroids coincide and the mask is
    empty.
    """

    mask: np.ndarray
    text_centroid: float
    background_centroid: float
    threshold: float
    iterations: int
    degenerate: bool = False


def kmeans2(img, max_iters: int = 100, tol: float = 0.5) -> ClusterResult:
    """Split a grayscale image into text and background clusters.

    Iteration stops when assignments are stable, when both centroids move
    less than ``tol``, or after ``max_iters`` rounds.
    """
    img = check_gray(img)
    if max_iters < 1:
        raise ValueError(f"max_iters must be >= 1, got {max_iters}")
    if tol < 0:
        raise ValueError(f"tol must be >= 0, got {tol}")

    hist = np.bincount(img.ravel(), minlength=256).astype(np.int64)
    levels = np.arange(256, dtype=np.float64)
    lo = float(img.min())
    hi = float(img.max())
    if lo == hi:
        return ClusterResult(
            mask=np.zeros(img.shape, dtype=bool),
            text_centroid=lo,
            background_centroid=lo,
            threshold=hi,
            iterations=0,
            degenerate=True,
        )

    c_lo, c_hi = lo, hi
    prev_cut = None
    iterations = 0
    for _ in range(max_iters):
        # Nearest-centroid assignment in 1-D is a cut at the midpoint;
        # a value exactly on the cut is equidistant and goes low.
        cut = (c_lo + c_hi) / 2.0
        iterations += 1
        if prev_cut is not None and _same_assignment(prev_cut, cut):
            break
        prev_cut = cut
        hi_side = levels > cut
        w_hi = hist[hi_side]
        w_lo = hist[~hi_side]
        new_hi = float(np.dot(w_hi, levels[hi_side]) / w_hi.sum())
        new_lo = float(np.dot(w_lo, levels[~hi_side]) / w_lo.sum())
        shift = max(abs(new_hi - c_hi), abs(new_lo - c_lo))
        c_lo, c_hi = new_lo, new_hi
        if shift < tol:
            break

    threshold = (c_lo + c_hi) / 2.0
    return ClusterResult(
        mask=img > threshold,
        text_centroid=c_hi,
        background_centroid=c_lo,
        threshold=threshold,
        iterations=iterations,
        degenerate=False,
    )


def _same_assignment(cut_a: float, cut_b: float) -> bool:
    # Two cuts induce the same partition of the integer levels when the
    # same levels fall strictly above both.
    return int(np.floor(cut_a)) == int(np.floor(cut_b)) or cut_a == cut_b
