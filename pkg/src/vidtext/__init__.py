"""Text block detection in video frames.

The pipeline: RGB channel fusion -> window sharpening -> two-means
binarization -> skeleton-based candidate filtering -> stroke-width
symmetry verification -> edge-guided region growing -> block metrics.
Each stage is importable on its own; :func:`run_pipeline` chains them,
and the estimator classes wrap the same code in a fit/transform API.
"""
from __future__ import annotations

from .binarize import ClusterResult, kmeans2
from .enhance import (
    DegenerateImageWarning,
    SharpenTrace,
    channel_fuse,
    sharpen,
    sharpen_trace,
)
from .estimators import (
    ChannelFuser,
    ClusterBinarizer,
    TextBlockDetector,
    WindowSharpener,
)
from .evaluate import (
    DEFAULT_COVERAGE,
    GroundTruth,
    Metrics,
    block_metrics,
    evaluate_frame,
    fmeasure,
    match_blocks,
    read_boxes,
    read_ground_truth,
    write_boxes,
)
from .grow import (
    GrowParams,
    TextBlock,
    edge_map,
    otsu_threshold,
    region_grow,
    segment,
)
from .morphology import (
    MIN_CANDIDATE_PIXELS,
    CandidateSet,
    Component,
    is_fully_connected,
    label_components,
    skeletonize,
    text_candidates,
)
from .pipeline import (
    PipelineConfig,
    PipelineResult,
    PipelineStageError,
    dump_intermediates,
    overlay_blocks,
    run_pipeline,
    run_stages,
)
from .raster import (
    BBox,
    ImageFormatError,
    Point,
    load_gray,
    load_image,
    save_gray,
    save_mask,
    save_rgb,
)
from .stroke import (
    GradientField,
    StrokeSample,
    WidthHistogram,
    component_samples,
    dominant_width,
    quantize_direction,
    sobel,
    stroke_width,
    symmetry_verify,
    symmetry_widths,
    text_representatives,
)
from .synth import gen_corpus, render_frame, render_glyph, render_line

__version__ = "0.1.0"

__all__ = [
    "BBox",
    "CandidateSet",
    "ChannelFuser",
    "ClusterBinarizer",
    "ClusterResult",
    "Component",
    "DEFAULT_COVERAGE",
    "DegenerateImageWarning",
    "GradientField",
    "GroundTruth",
    "GrowParams",
    "ImageFormatError",
    "MIN_CANDIDATE_PIXELS",
    "Metrics",
    "PipelineConfig",
    "PipelineResult",
    "PipelineStageError",
    "Point",
    "SharpenTrace",
    "StrokeSample",
    "TextBlock",
    "TextBlockDetector",
    "WidthHistogram",
    "WindowSharpener",
    "block_metrics",
    "channel_fuse",
    "component_samples",
    "dominant_width",
    "dump_intermediates",
    "edge_map",
    "evaluate_frame",
    "fmeasure",
    "gen_corpus",
    "is_fully_connected",
    "kmeans2",
    "label_components",
    "load_gray",
    "load_image",
    "match_blocks",
    "otsu_threshold",
    "overlay_blocks",
    "quantize_direction",
    "read_boxes",
    "read_ground_truth",
    "region_grow",
    "render_frame",
    "render_glyph",
    "render_line",
    "run_pipeline",
    "run_stages",
    "save_gray",
    "save_mask",
    "save_rgb",
    "segment",
    "sharpen",
    "sharpen_trace",
    "skeletonize",
    "sobel",
    "stroke_width",
    "symmetry_verify",
    "symmetry_widths",
    "text_candidates",
    "text_representatives",
    "write_boxes",
]
