"""End-to-end frame processing: RGB frame in, text blocks out.

Stages run in a fixed order (fuse, sharpen, binarize, candidates, sobel,
edges, verify, grow); any failure is re-raised as
:class:`PipelineStageError` tagged with the stage name so batch drivers
can report where a frame died.
"""
from __future__ import annotations

from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from .binarize import ClusterResult, kmeans2
from .enhance import channel_fuse, sharpen
from .grow import GrowParams, TextBlock, edge_map_from_gradient, segment
from .morphology import (
    MIN_CANDIDATE_PIXELS,
    CandidateSet,
    text_candidates,
)
from .raster import load_image, save_gray, save_mask, save_rgb
from .stroke import RAY_MODES, GradientField, sobel, symmetry_verify
from .validation import check_rgb, check_window


@dataclass(frozen=True)
class PipelineConfig:
    """Every tunable of the detection pipeline in one place."""

    window: int = 3
    passes: int = 1
    kmeans_max_iters: int = 100
    kmeans_tol: float = 0.5
    min_component_pixels: int = MIN_CANDIDATE_PIXELS
    symmetry_tol: float = 0.0
    max_ray: float | None = None
    ray_mode: str = "gradient"
    spacing_factor: float = 1.0
    direction_mode: str = "nearest"
    edge_threshold: float | None = None

    def grow_params(self) -> GrowParams:
        return GrowParams(
            spacing_factor=self.spacing_factor,
            direction_mode=self.direction_mode,
            edge_threshold=self.edge_threshold,
        )

    def validate(self) -> "PipelineConfig":
        """Range-check every field; raises ValueError on the first bad one."""
        check_window(self.window)
        if self.passes < 1:
            raise ValueError(f"passes must be >= 1, got {self.passes}")
        if self.kmeans_max_iters < 1:
            raise ValueError(
                f"kmeans_max_iters must be >= 1, got {self.kmeans_max_iters}"
            )
        if self.kmeans_tol < 0:
            raise ValueError(f"kmeans_tol must be >= 0, got {self.kmeans_tol}")
        if self.min_component_pixels < 1:
            raise ValueError(
                f"min_component_pixels must be >= 1, got {self.min_component_pixels}"
            )
        if self.symmetry_tol < 0:
            raise ValueError(f"symmetry_tol must be >= 0, got {self.symmetry_tol}")
        if self.max_ray is not None and self.max_ray <= 0:
            raise ValueError(f"max_ray must be positive, got {self.max_ray}")
        if self.ray_mode not in RAY_MODES:
            raise ValueError(
                f"ray_mode must be one of {RAY_MODES}, got {self.ray_mode!r}"
            )
        if self.edge_threshold is not None and self.edge_threshold < 0:
            raise ValueError(
                f"edge_threshold must be >= 0, got {self.edge_threshold}"
            )
        self.grow_params()
        return self

    @staticmethod
    def field_names() -> tuple:
        return tuple(f.name for f in fields(PipelineConfig))


class PipelineStageError(RuntimeError):
    """A stage failed; ``stage`` names it, ``__cause__`` holds the error."""

    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage


@dataclass
class PipelineResult:
    """Every intermediate of one frame, for dumps and inspection."""

    frame: np.ndarray
    enhanced: np.ndarray
    sharpened: np.ndarray
    cluster: ClusterResult
    candidates: CandidateSet
    gradient: GradientField
    edges: np.ndarray
    representatives: list = field(default_factory=list)
    blocks: list = field(default_factory=list)


def _run(stage: str, thunk):
    try:
        return thunk()
    except PipelineStageError:
        raise
    except Exception as exc:
        raise PipelineStageError(stage, exc) from exc


def run_stages(frame, config: PipelineConfig | None = None) -> PipelineResult:
    """Run the full pipeline on an in-memory RGB frame."""
    cfg = config if config is not None else PipelineConfig()
    frame = _run("input", lambda: check_rgb(frame))
    enhanced = _run("fuse", lambda: channel_fuse(frame))
    sharpened = _run(
        "sharpen", lambda: sharpen(enhanced, cfg.window, cfg.passes)
    )
    cluster = _run(
        "binarize",
        lambda: kmeans2(sharpened, cfg.kmeans_max_iters, cfg.kmeans_tol),
    )
    cands = _run(
        "candidates",
        lambda: text_candidates(cluster.mask, cfg.min_component_pixels),
    )
    gradient = _run("sobel", lambda: sobel(enhanced))
    edges = _run(
        "edges", lambda: edge_map_from_gradient(gradient, cfg.edge_threshold)
    )
    reps = _run(
        "verify",
        lambda: [
            c
            for c in cands.candidates
            if symmetry_verify(
                c,
                gradient,
                cands.mask,
                cfg.symmetry_tol,
                cfg.max_ray,
                cfg.ray_mode,
            )
        ],
    )
    blocks = _run("grow", lambda: segment(reps, edges, cfg.grow_params()))
    return PipelineResult(
        frame=frame,
        enhanced=enhanced,
        sharpened=sharpened,
        cluster=cluster,
        candidates=cands,
        gradient=gradient,
        edges=edges,
        representatives=reps,
        blocks=blocks,
    )


def run_pipeline(
    path, config: PipelineConfig | None = None, dump_dir=None
) -> list[TextBlock]:
    """Process one frame file; optionally dump every intermediate."""
    frame = _run("load", lambda: load_image(path))
    result = run_stages(frame, config)
    if dump_dir is not None:
        dump_intermediates(result, dump_dir)
    return result.blocks


def dump_intermediates(result: PipelineResult, dump_dir) -> None:
    """Write each stage output into ``dump_dir``.

    Masks are written as 0/255 PGMs; the overlay draws detected boxes on
    the input frame.
    """
    out = Path(dump_dir)
    out.mkdir(parents=True, exist_ok=True)
    save_rgb(result.frame, out / "frame.ppm")
    save_gray(result.enhanced, out / "enhanced.pgm")
    save_gray(result.sharpened, out / "sharpened.pgm")
    save_mask(result.cluster.mask, out / "mask.pgm")
    save_mask(result.candidates.skeleton, out / "skeleton.pgm")
    save_mask(_components_mask(result.candidates.candidates, result.frame.shape),
              out / "candidates.pgm")
    save_mask(_components_mask(result.representatives, result.frame.shape),
              out / "representatives.pgm")
    save_mask(result.edges, out / "edges.pgm")
    save_rgb(overlay_blocks(result.frame, result.blocks), out / "overlay.png")


def _components_mask(components, shape) -> np.ndarray:
    mask = np.zeros(shape[:2], dtype=bool)
    for comp in components:
        mask[comp.pixels[:, 1], comp.pixels[:, 0]] = True
    return mask


def overlay_blocks(frame, blocks, color=(255, 48, 48)) -> np.ndarray:
    """Copy of the frame with a 2-pixel box drawn around each block."""
    frame = check_rgb(frame)
    out = frame.copy()
    h, w = out.shape[:2]
    for blk in blocks:
        b = blk.bbox if hasattr(blk, "bbox") else blk
        x0 = max(b.x - 1, 0)
        y0 = max(b.y - 1, 0)
        x1 = min(b.right + 1, w)
        y1 = min(b.bottom + 1, h)
        for c, value in enumerate(color):
            out[y0:y1, x0 : min(x0 + 2, w), c] = value
            out[y0:y1, max(x1 - 2, 0) : x1, c] = value
            out[y0 : min(y0 + 2, h), x0:x1, c] = value
            out[max(y1 - 2, 0) : y1, x0:x1, c] = value
    return out
