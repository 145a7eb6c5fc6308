"""scikit-learn style wrappers around the functional pipeline.

Because frames vary in size, a sample collection ``X`` is a sequence of
images rather than one stacked array. All transformers are stateless:
``fit`` validates parameters and returns ``self``, so they compose with
``sklearn.pipeline.Pipeline`` and survive ``clone``.
"""
from __future__ import annotations

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .binarize import kmeans2
from .enhance import channel_fuse, sharpen
from .evaluate import DEFAULT_COVERAGE, block_metrics, match_blocks
from .pipeline import PipelineConfig, run_stages
from .validation import check_gray, check_rgb, check_window


def _as_list(X):
    if X is None:
        raise ValueError("X must be a sequence of images, got None")
    return list(X)


class ChannelFuser(TransformerMixin, BaseEstimator):
    """Collapse RGB frames to grayscale by per-pixel channel selection."""

    def fit(self, X, y=None):
        for frame in _as_list(X):
            check_rgb(frame)
        self.is_fitted_ = True
        return self

    def transform(self, X):
        return [channel_fuse(frame) for frame in _as_list(X)]


class WindowSharpener(TransformerMixin, BaseEstimator):
    """Sliding-window extreme-snapping sharpener."""

    def __init__(self, window: int = 3, passes: int = 1):
        self.window = window
        self.passes = passes

    def fit(self, X, y=None):
        check_window(self.window)
        if self.passes < 1:
            raise ValueError(f"passes must be >= 1, got {self.passes}")
        for img in _as_list(X):
            check_gray(img)
        self.is_fitted_ = True
        return self

    def transform(self, X):
        return [sharpen(img, self.window, self.passes) for img in _as_list(X)]


class ClusterBinarizer(TransformerMixin, BaseEstimator):
    """Two-means intensity split; transform yields boolean text masks."""

    def __init__(self, max_iters: int = 100, tol: float = 0.5):
        self.max_iters = max_iters
        self.tol = tol

    def fit(self, X, y=None):
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")
        if self.tol < 0:
            raise ValueError(f"tol must be >= 0, got {self.tol}")
        for img in _as_list(X):
            check_gray(img)
        self.is_fitted_ = True
        return self

    def transform(self, X):
        return [
            kmeans2(img, self.max_iters, self.tol).mask for img in _as_list(X)
        ]


class TextBlockDetector(BaseEstimator):
    """Whole-pipeline detector: frames in, text blocks out.

    ``predict`` returns one list of blocks per frame; ``score`` reports the
    block-level f-measure against ground-truth boxes at the configured
    coverage.
    """

    def __init__(
        self,
        window: int = 3,
        passes: int = 1,
        kmeans_max_iters: int = 100,
        kmeans_tol: float = 0.5,
        min_component_pixels: int = 4,
        symmetry_tol: float = 0.0,
        max_ray: float | None = None,
        ray_mode: str = "gradient",
        spacing_factor: float = 1.0,
        direction_mode: str = "nearest",
        edge_threshold: float | None = None,
        coverage: float = DEFAULT_COVERAGE,
    ):
        self.window = window
        self.passes = passes
        self.kmeans_max_iters = kmeans_max_iters
        self.kmeans_tol = kmeans_tol
        self.min_component_pixels = min_component_pixels
        self.symmetry_tol = symmetry_tol
        self.max_ray = max_ray
        self.ray_mode = ray_mode
        self.spacing_factor = spacing_factor
        self.direction_mode = direction_mode
        self.edge_threshold = edge_threshold
        self.coverage = coverage

    def fit(self, X=None, y=None):
        """Validate parameters; the detector learns nothing from data."""
        self.config_ = PipelineConfig(
            window=check_window(self.window),
            passes=self.passes,
            kmeans_max_iters=self.kmeans_max_iters,
            kmeans_tol=self.kmeans_tol,
            min_component_pixels=self.min_component_pixels,
            symmetry_tol=self.symmetry_tol,
            max_ray=self.max_ray,
            ray_mode=self.ray_mode,
            spacing_factor=self.spacing_factor,
            direction_mode=self.direction_mode,
            edge_threshold=self.edge_threshold,
        )
        self.config_.validate()
        if X is not None:
            for frame in _as_list(X):
                check_rgb(frame)
        return self

    def predict(self, X):
        if not hasattr(self, "config_"):
            raise NotFittedError(
                "this TextBlockDetector is not fitted yet; call fit() first"
            )
        return [run_stages(frame, self.config_).blocks for frame in _as_list(X)]

    def score(self, X, y) -> float:
        """Aggregate f-measure of ``predict(X)`` against per-frame GT boxes."""
        predictions = self.predict(X)
        truths = _as_list(y)
        if len(predictions) != len(truths):
            raise ValueError(
                f"got {len(predictions)} frames but {len(truths)} truth lists"
            )
        tdb = fdb = atb = 0
        for blocks, truth in zip(predictions, truths):
            truth = list(truth)
            verdicts = match_blocks(blocks, truth, self.coverage)
            tdb += sum(verdicts)
            fdb += len(verdicts) - sum(verdicts)
            atb += len(truth)
        return block_metrics(tdb=tdb, fdb=fdb, atb=atb).fmeasure
