from __future__ import annotations

import numpy as np
import pytest

from vidtext.binarize import kmeans2
from vidtext.enhance import channel_fuse, sharpen
from vidtext.pipeline import (
    PipelineConfig,
    PipelineResult,
    PipelineStageError,
    dump_intermediates,
    overlay_blocks,
    run_pipeline,
    run_stages,
)
from vidtext.raster import load_gray, load_image, save_rgb
from vidtext.synth import render_frame


@pytest.fixture(scope="module")
def frame():
    return render_frame(np.random.default_rng(4), size=(320, 240))[0]


@pytest.fixture(scope="module")
def result(frame):
    return run_stages(frame)


class TestRunStages:
    def test_detects_on_a_synthetic_frame(self, frame, result):
        assert len(result.blocks) >= 1
        h, w = frame.shape[:2]
        for blk in result.blocks:
            assert 0 <= blk.bbox.x and blk.bbox.right <= w
            assert 0 <= blk.bbox.y and blk.bbox.bottom <= h

    def test_intermediates_chain_exactly(self, frame, result):
        cfg = PipelineConfig()
        assert np.array_equal(result.enhanced, channel_fuse(frame))
        assert np.array_equal(
            result.sharpened, sharpen(result.enhanced, cfg.window, cfg.passes)
        )
        cluster = kmeans2(result.sharpened, cfg.kmeans_max_iters, cfg.kmeans_tol)
        assert np.array_equal(result.cluster.mask, cluster.mask)
        assert result.cluster.threshold == cluster.threshold

    def test_representatives_subset_of_candidates(self, result):
        ids = {c.id for c in result.candidates.candidates}
        assert {r.id for r in result.representatives} <= ids

    def test_deterministic(self, frame):
        a = run_stages(frame)
        b = run_stages(frame)
        assert [blk.bbox for blk in a.blocks] == [blk.bbox for blk in b.blocks]

    def test_blank_frame_has_no_blocks(self):
        blank = np.full((120, 160, 3), 128, dtype=np.uint8)
        res = run_stages(blank)
        assert res.blocks == []
        assert res.representatives == []

    def test_input_frame_not_mutated(self, frame):
        before = frame.copy()
        run_stages(frame)
        assert np.array_equal(frame, before)

    @pytest.mark.filterwarnings("ignore::vidtext.DegenerateImageWarning")
    def test_tiny_frame_fails_in_the_sobel_stage(self):
        tiny = np.zeros((2, 2, 3), dtype=np.uint8)
        with pytest.raises(PipelineStageError) as exc:
            run_stages(tiny)
        assert exc.value.stage == "sobel"
        assert "sobel" in str(exc.value)

    def test_gray_input_rejected_at_input_stage(self):
        with pytest.raises(PipelineStageError) as exc:
            run_stages(np.zeros((50, 50), dtype=np.uint8))
        assert exc.value.stage == "input"


class TestConfigPlumbing:
    def test_window_changes_sharpening(self, frame):
        a = run_stages(frame, PipelineConfig(window=3))
        b = run_stages(frame, PipelineConfig(window=5))
        assert not np.array_equal(a.sharpened, b.sharpened)

    def test_spacing_changes_blocks(self, frame):
        tight = run_stages(frame, PipelineConfig(spacing_factor=0.05))
        loose = run_stages(frame, PipelineConfig(spacing_factor=3.0))
        assert len(tight.blocks) >= len(loose.blocks)

    def test_min_pixels_filters_candidates(self, frame):
        few = run_stages(frame, PipelineConfig(min_component_pixels=1))
        many = run_stages(frame, PipelineConfig(min_component_pixels=500))
        assert len(few.candidates.candidates) >= len(many.candidates.candidates)

    def test_edge_threshold_zero_grows_edge_set(self, frame):
        default = run_stages(frame)
        everything = run_stages(frame, PipelineConfig(edge_threshold=0.0))
        assert everything.edges.sum() >= default.edges.sum()

    def test_validate_accepts_defaults(self):
        cfg = PipelineConfig()
        assert cfg.validate() is cfg

    def test_validate_rejections(self):
        bad = [
            dict(window=4),
            dict(window=1),
            dict(passes=0),
            dict(kmeans_max_iters=0),
            dict(kmeans_tol=-0.1),
            dict(min_component_pixels=0),
            dict(symmetry_tol=-1.0),
            dict(max_ray=0.0),
            dict(ray_mode="spiral"),
            dict(spacing_factor=0.0),
            dict(direction_mode="up"),
            dict(edge_threshold=-5.0),
        ]
        for kwargs in bad:
            with pytest.raises(ValueError):
                PipelineConfig(**kwargs).validate()

    def test_field_names_cover_every_field(self):
        names = PipelineConfig.field_names()
        assert "window" in names and "direction_mode" in names
        assert len(names) == 11


class TestRunPipeline:
    def test_matches_run_stages(self, frame, tmp_path):
        path = tmp_path / "frame.ppm"
        save_rgb(frame, path)
        blocks = run_pipeline(path)
        assert [b.bbox for b in blocks] == [b.bbox for b in run_stages(frame).blocks]

    def test_unreadable_path_fails_in_load_stage(self, tmp_path):
        with pytest.raises(PipelineStageError) as exc:
            run_pipeline(tmp_path / "missing.ppm")
        assert exc.value.stage == "load"

    def test_dump_round_trips_every_plane(self, frame, tmp_path):
        path = tmp_path / "frame.ppm"
        save_rgb(frame, path)
        dump = tmp_path / "dump"
        run_pipeline(path, dump_dir=dump)
        res = run_stages(frame)

        assert np.array_equal(load_image(dump / "frame.ppm"), frame)
        assert np.array_equal(load_gray(dump / "enhanced.pgm"), res.enhanced)
        assert np.array_equal(load_gray(dump / "sharpened.pgm"), res.sharpened)
        assert np.array_equal(
            load_gray(dump / "mask.pgm") > 0, res.cluster.mask
        )
        assert np.array_equal(
            load_gray(dump / "skeleton.pgm") > 0, res.candidates.skeleton
        )
        cand_mask = load_gray(dump / "candidates.pgm") > 0
        rep_mask = load_gray(dump / "representatives.pgm") > 0
        assert cand_mask.sum() == sum(len(c.pixels) for c in res.candidates.candidates)
        assert rep_mask.sum() == sum(len(c.pixels) for c in res.representatives)
        assert rep_mask[cand_mask].all() or not rep_mask.any()
        assert np.array_equal(load_gray(dump / "edges.pgm") > 0, res.edges)
        overlay = load_image(dump / "overlay.png")
        assert np.array_equal(overlay, overlay_blocks(frame, res.blocks))


class TestDumpIntermediates:
    def test_writes_every_file(self, result, tmp_path):
        dump_intermediates(result, tmp_path / "d")
        names = sorted(p.name for p in (tmp_path / "d").iterdir())
        assert names == [
            "candidates.pgm",
            "edges.pgm",
            "enhanced.pgm",
            "frame.ppm",
            "mask.pgm",
            "overlay.png",
            "representatives.pgm",
            "sharpened.pgm",
            "skeleton.pgm",
        ]


class TestOverlay:
    def test_draws_within_bounds_even_for_edge_boxes(self):
        frame = np.zeros((20, 30, 3), dtype=np.uint8)
        from vidtext.raster import BBox

        out = overlay_blocks(frame, [BBox(0, 0, 30, 20), BBox(28, 18, 2, 2)])
        assert out.shape == frame.shape
        assert out.max() == 255
        assert np.array_equal(frame, np.zeros_like(frame))  # input untouched

    def test_no_blocks_copies_frame(self):
        frame = np.arange(60, dtype=np.uint8).reshape(4, 5, 3)
        out = overlay_blocks(frame, [])
        assert np.array_equal(out, frame)
        assert out is not frame


class TestStageError:
    @pytest.mark.filterwarnings("ignore::vidtext.DegenerateImageWarning")
    def test_carries_stage_and_cause(self):
        try:
            run_stages(np.zeros((2, 2, 3), dtype=np.uint8))
        except PipelineStageError as exc:
            assert exc.stage == "sobel"
            assert isinstance(exc.__cause__, ValueError)
        else:  # pragma: no cover
            pytest.fail("expected PipelineStageError")
