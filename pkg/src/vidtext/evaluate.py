"""Block-level detection quality: coverage matching and R/P/F metrics.

A detected block is truly detected when it covers at least a fixed
fraction of some ground-truth block's area; every other detection is
false. Recall, precision and f-measure are derived from those counts with
exact rational arithmetic and emitted as floats, so small integer cases
come out exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .raster import BBox

DEFAULT_COVERAGE = 0.9

GT_SUFFIX = ".gt.txt"
DET_SUFFIX = ".det.txt"


@dataclass
class GroundTruth:
    frame_id: str
    blocks: list


@dataclass
class Metrics:
    """Counts plus derived rates for one frame or an aggregate.

    ``atb`` is the number of ground-truth blocks, ``tdb``/``fdb`` the true
    and false detections. ``tdb + fdb`` always equals the number of
    detected blocks evaluated.
    """

    atb: int
    tdb: int
    fdb: int
    recall: float
    precision: float
    fmeasure: float


def match_blocks(detected, truth, coverage: float = DEFAULT_COVERAGE) -> list[bool]:
    """Per-detection verdicts: True when the detection covers a GT block.

    A detection counts as true when its intersection with some ground-truth
    block is at least ``coverage`` of that block's area. One ground-truth
    block may certify any number of detections.
    """
    if not 0 < coverage <= 1:
        raise ValueError(f"coverage must be in (0, 1], got {coverage}")
    verdicts = []
    for det in detected:
        det = _as_bbox(det)
        verdicts.append(
            any(
                det.intersection_area(gt) >= coverage * gt.area
                for gt in map(_as_bbox, truth)
            )
        )
    return verdicts


def block_metrics(tdb: int, fdb: int, atb: int) -> Metrics:
    """Metrics from counts; undefined ratios degrade to 0 rather than raise."""
    for name, value in (("tdb", tdb), ("fdb", fdb), ("atb", atb)):
        if value < 0:
            raise ValueError(f"{name} must be >= 0, got {value}")
    recall = Fraction(tdb, atb) if atb else Fraction(0)
    precision = Fraction(tdb, tdb + fdb) if (tdb + fdb) else Fraction(0)
    if recall + precision:
        fm = 2 * recall * precision / (recall + precision)
    else:
        fm = Fraction(0)
    return Metrics(
        atb=atb,
        tdb=tdb,
        fdb=fdb,
        recall=float(recall),
        precision=float(precision),
        fmeasure=float(fm),
    )


def fmeasure(recall: float, precision: float) -> float:
    """Harmonic mean of recall and precision; 0 when both are 0."""
    if recall + precision == 0:
        return 0.0
    return 2.0 * recall * precision / (recall + precision)


def evaluate_frame(detected, truth, coverage: float = DEFAULT_COVERAGE) -> Metrics:
    """Match one frame's detections against its ground truth."""
    verdicts = match_blocks(detected, truth, coverage)
    tdb = sum(verdicts)
    return block_metrics(tdb=tdb, fdb=len(verdicts) - tdb, atb=len(list(truth)))


def read_boxes(path) -> list[BBox]:
    """Read ``x y w h`` lines; blank lines and ``#`` comments are skipped."""
    boxes = []
    text = Path(path).read_text(encoding="ascii")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 4:
            raise ValueError(f"{path}:{lineno}: expected 'x y w h', got {raw!r}")
        try:
            x, y, w, h = (int(p) for p in parts)
            boxes.append(BBox(x, y, w, h))
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: {exc}") from None
    return boxes


def write_boxes(path, boxes) -> None:
    """Write one ``x y w h`` line per box (deterministic bytes)."""
    lines = [f"{b.x} {b.y} {b.w} {b.h}\n" for b in map(_as_bbox, boxes)]
    Path(path).write_text("".join(lines), encoding="ascii")


def read_ground_truth(path) -> GroundTruth:
    """Read a ``<frame-stem>.gt.txt`` sidecar."""
    path = Path(path)
    name = path.name
    stem = name[: -len(GT_SUFFIX)] if name.endswith(GT_SUFFIX) else path.stem
    return GroundTruth(frame_id=stem, blocks=read_boxes(path))


def _as_bbox(box) -> BBox:
    if isinstance(box, BBox):
        return box
    if hasattr(box, "bbox"):
        return box.bbox
    x, y, w, h = box
    return BBox(int(x), int(y), int(w), int(h))
