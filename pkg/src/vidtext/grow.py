"""Edge-guided region growing from verified text components to blocks.

A block starts from the edge components under a seed's bounding box and
repeatedly absorbs the nearest unabsorbed edge component whose gap (the
minimum chessboard distance between pixel sets) stays within a spacing
budget proportional to the seed's height. Character spacing inside a text
line sits well under one glyph height, while neighbouring lines sit
further apart, so the budget grows lines without bridging them.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .morphology import Component, label_components
from .raster import BBox
from .stroke import GradientField, sobel
from .validation import check_gray, check_mask

log = logging.getLogger(__name__)

DIRECTION_MODES = ("nearest", "horizontal")


@dataclass(frozen=True)
class GrowParams:
    """Growth tuning.

    ``spacing_factor`` scales the seed height into the absorption budget.
    ``direction_mode`` restricts which edge components may be absorbed:
    ``"nearest"`` considers all of them, ``"horizontal"`` only those whose
    row interval overlaps the seed's. ``edge_threshold`` overrides the
    Otsu default of :func:`edge_map`.
    """

    spacing_factor: float = 1.0
    direction_mode: str = "nearest"
    edge_threshold: float | None = None

    def __post_init__(self):
        if self.spacing_factor <= 0:
            raise ValueError(f"spacing_factor must be > 0, got {self.spacing_factor}")
        if self.direction_mode not in DIRECTION_MODES:
            raise ValueError(
                f"direction_mode must be one of {DIRECTION_MODES}, "
                f"got {self.direction_mode!r}"
            )


@dataclass
class TextBlock:
    """A detected block: tight box over the absorbed edge components.

    ``members`` holds absorbed edge-component ids; it is empty only in the
    degenerate case where the seed overlapped no edge component and the
    block fell back to the seed's own box.
    """

    bbox: BBox
    members: list = field(default_factory=list)
    seed_id: int = 0


def otsu_threshold(values: np.ndarray) -> float:
    """Otsu's threshold over a 256-bin histogram of nonnegative values."""
    values = np.asarray(values, dtype=np.float64)
    vmax = float(values.max()) if values.size else 0.0
    if vmax <= 0.0:
        return 0.0
    hist, edges = np.histogram(values, bins=256, range=(0.0, vmax))
    total = hist.sum()
    weights = hist.astype(np.float64) / total
    centers = (edges[:-1] + edges[1:]) / 2.0
    w0 = np.cumsum(weights)
    mu = np.cumsum(weights * centers)
    mu_total = mu[-1]
    w1 = 1.0 - w0
    with np.errstate(divide="ignore", invalid="ignore"):
        between = (mu_total * w0 - mu) ** 2 / (w0 * w1)
    between[~np.isfinite(between)] = -1.0
    best = int(np.argmax(between))
    return float(edges[best + 1])


def edge_map(enhanced, threshold: float | None = None) -> np.ndarray:
    """Threshold the Sobel magnitude of the enhanced image into edges.

    A pixel is an edge when its magnitude is nonzero and at or above the
    threshold; with the default (Otsu over the magnitude image) a flat
    image yields an empty map.
    """
    enhanced = check_gray(enhanced)
    return edge_map_from_gradient(sobel(enhanced), threshold)


def edge_map_from_gradient(
    grad: GradientField, threshold: float | None = None
) -> np.ndarray:
    """Same as :func:`edge_map` for a gradient already computed."""
    mag = grad.magnitude
    if threshold is None:
        threshold = otsu_threshold(mag)
    if threshold < 0:
        raise ValueError(f"threshold must be >= 0, got {threshold}")
    return (mag >= threshold) & (mag > 0.0)


class _EdgeGraph:
    """Edge components of a frame plus exact pairwise chessboard gaps.

    On an unobstructed pixel grid the chessboard metric between two pixel
    sets is a pure metric (rays pass through anything), so one chessboard
    distance transform per component gives exact set-to-set gaps.
    """

    def __init__(self, edges: np.ndarray):
        self.shape = edges.shape
        self.components = label_components(edges)
        n = len(self.components)
        self.gaps = np.zeros((n, n), dtype=np.float64)
        for i, comp in enumerate(self.components):
            seed = np.ones(self.shape, dtype=np.uint8)
            seed[comp.pixels[:, 1], comp.pixels[:, 0]] = 0
            dist = ndimage.distance_transform_cdt(seed, metric="chessboard")
            for j, other in enumerate(self.components):
                if j == i:
                    continue
                self.gaps[i, j] = dist[other.pixels[:, 1], other.pixels[:, 0]].min()

    def overlapping(self, bbox: BBox) -> list[int]:
        """Indices of components with at least one pixel inside the box."""
        out = []
        for i, comp in enumerate(self.components):
            if bbox.intersection_area(comp.bbox) == 0:
                continue
            xs = comp.pixels[:, 0]
            ys = comp.pixels[:, 1]
            inside = (
                (xs >= bbox.x)
                & (xs < bbox.right)
                & (ys >= bbox.y)
                & (ys < bbox.bottom)
            )
            if inside.any():
                out.append(i)
        return out


def region_grow(
    seed: Component, edges, params: GrowParams | None = None
) -> TextBlock:
    """Grow one block from a verified seed over the edge map."""
    edges = check_mask(edges)
    if params is None:
        params = GrowParams()
    return _grow(seed, _EdgeGraph(edges), params)


def _grow(seed: Component, graph: _EdgeGraph, params: GrowParams) -> TextBlock:
    start = graph.overlapping(seed.bbox)
    if not start:
        log.debug("seed %d overlaps no edge component", seed.id)
        return TextBlock(bbox=seed.bbox, members=[], seed_id=seed.id)

    budget = params.spacing_factor * seed.bbox.h
    absorbed = set(start)
    if params.direction_mode == "horizontal":
        eligible = [
            i
            for i in range(len(graph.components))
            if _rows_overlap(graph.components[i].bbox, seed.bbox)
        ]
    else:
        eligible = list(range(len(graph.components)))

    # best_gap[i] = distance from component i to the absorbed set so far.
    best_gap = {i: min(graph.gaps[j, i] for j in absorbed) for i in eligible}
    while True:
        candidates = [
            (gap, i)
            for i, gap in best_gap.items()
            if i not in absorbed and gap <= budget
        ]
        if not candidates:
            break
        _, chosen = min(candidates)
        absorbed.add(chosen)
        for i in eligible:
            g = graph.gaps[chosen, i]
            if g < best_gap[i]:
                best_gap[i] = g

    members = sorted(graph.components[i].id for i in absorbed)
    xs = np.concatenate([graph.components[i].pixels[:, 0] for i in sorted(absorbed)])
    ys = np.concatenate([graph.components[i].pixels[:, 1] for i in sorted(absorbed)])
    return TextBlock(bbox=BBox.around(xs, ys), members=members, seed_id=seed.id)


def _rows_overlap(a: BBox, b: BBox) -> bool:
    return a.y < b.bottom and b.y < a.bottom


def segment(
    representatives, edges, params: GrowParams | None = None
) -> list[TextBlock]:
    """Grow a block per representative, merge duplicates, and sort.

    Blocks whose boxes overlap by more than half of the smaller area are
    merged (members united, box unioned) until no such pair remains. The
    result is ordered top-to-bottom, then left-to-right.
    """
    edges = check_mask(edges)
    if params is None:
        params = GrowParams()
    reps = list(representatives)
    if not reps:
        return []
    graph = _EdgeGraph(edges)
    blocks = [_grow(seed, graph, params) for seed in reps]

    merged = True
    while merged:
        merged = False
        for i in range(len(blocks)):
            for j in range(i + 1, len(blocks)):
                a, b = blocks[i], blocks[j]
                inter = a.bbox.intersection_area(b.bbox)
                smaller = min(a.bbox.area, b.bbox.area)
                if inter * 2 > smaller:
                    blocks[i] = TextBlock(
                        bbox=a.bbox.union(b.bbox),
                        members=sorted(set(a.members) | set(b.members)),
                        seed_id=min(a.seed_id, b.seed_id),
                    )
                    del blocks[j]
                    merged = True
                    break
            if merged:
                break
    blocks.sort(key=lambda blk: (blk.bbox.y, blk.bbox.x))
    return blocks
