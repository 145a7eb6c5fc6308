from __future__ import annotations

import numpy as np
import pytest

from vidtext.evaluate import read_boxes, read_ground_truth
from vidtext.morphology import skeletonize, text_candidates
from vidtext.raster import load_image
from vidtext.synth import (
    LOOP_GLYPHS,
    OPEN_GLYPHS,
    STROKE,
    gen_corpus,
    random_text,
    render_frame,
    render_glyph,
    render_line,
)


class TestGlyphs:
    def test_shape_scales_with_unit(self):
        for unit in (2, 3, 4):
            g = render_glyph("O", unit)
            assert g.shape == (6 * unit, 4 * unit)

    def test_loop_glyphs_carry_holes(self):
        for ch in LOOP_GLYPHS:
            glyph = render_glyph(ch, 3)
            padded = np.pad(glyph, 4)
            cands = text_candidates(padded)
            assert len(cands.candidates) >= 1, ch

    def test_open_glyphs_carry_none(self):
        for ch in OPEN_GLYPHS:
            glyph = render_glyph(ch, 3)
            padded = np.pad(glyph, 4)
            cands = text_candidates(padded)
            assert len(cands.candidates) == 0, ch

    def test_stroke_thickness_is_constant(self):
        # every row/column run in an "I" is exactly STROKE pixels wide
        g = render_glyph("I", 4)
        widths = g.sum(axis=1)
        assert set(widths[widths > 0]) == {STROKE}

    def test_unknown_char_rejected(self):
        with pytest.raises(KeyError):
            render_glyph("@", 3)

    def test_tiny_unit_rejected(self):
        with pytest.raises(ValueError):
            render_glyph("O", 1)


class TestLines:
    def test_width_formula(self):
        unit = 3
        line = render_line("OIL", unit)
        assert line.shape == (6 * unit, 3 * 4 * unit + 2 * (unit + 1))

    def test_glyphs_disconnected_by_gap(self):
        from vidtext.morphology import label_components

        line = render_line("III", 2)
        comps = label_components(np.pad(line, 2))
        assert len(comps) == 3

    def test_skeleton_keeps_loops(self):
        line = np.pad(render_line("OO", 3), 4)
        skel = skeletonize(line)
        cands = text_candidates(np.asarray(line))
        assert skel[line].size  # skeleton is inside the line mask
        assert len(cands.candidates) == 2


class TestRandomText:
    def test_always_contains_a_loop_glyph(self):
        for seed in range(30):
            rng = np.random.default_rng(seed)
            text = random_text(rng, 6)
            assert len(text) == 6
            assert any(c in LOOP_GLYPHS for c in text)
            assert all(c in LOOP_GLYPHS + OPEN_GLYPHS for c in text)

    def test_deterministic_per_seed(self):
        a = random_text(np.random.default_rng(5), 8)
        b = random_text(np.random.default_rng(5), 8)
        assert a == b


class TestFrames:
    def test_frame_layout(self):
        frame, boxes = render_frame(np.random.default_rng(1), size=(320, 240))
        assert frame.shape == (240, 320, 3)
        assert frame.dtype == np.uint8
        assert 1 <= len(boxes) <= 3
        for b in boxes:
            assert 0 <= b.x and b.right <= 320
            assert 0 <= b.y and b.bottom <= 240
        keys = [(b.y, b.x) for b in boxes]
        assert keys == sorted(keys)

    def test_text_is_brighter_than_surroundings(self):
        frame, boxes = render_frame(np.random.default_rng(2), size=(320, 240))
        gray = frame.mean(axis=2)
        b = boxes[0]
        inside = gray[b.y : b.bottom, b.x : b.right].max()
        assert inside > 150  # glyph level is far above the background cap

    def test_too_small_frame_rejected(self):
        with pytest.raises(ValueError):
            render_frame(np.random.default_rng(0), size=(64, 64))


class TestCorpus:
    def test_bytes_deterministic_across_runs(self, tmp_path):
        a = gen_corpus(tmp_path / "a", count=3, seed=11)
        b = gen_corpus(tmp_path / "b", count=3, seed=11)
        assert [p.name for p in a] == [p.name for p in b]
        for pa, pb in zip(a, b):
            assert pa.read_bytes() == pb.read_bytes()
            ga = pa.with_name(pa.stem + ".gt.txt")
            gb = pb.with_name(pb.stem + ".gt.txt")
            assert ga.read_bytes() == gb.read_bytes()

    def test_different_seeds_differ(self, tmp_path):
        a = gen_corpus(tmp_path / "a", count=1, seed=1)
        b = gen_corpus(tmp_path / "b", count=1, seed=2)
        assert a[0].read_bytes() != b[0].read_bytes()

    def test_sidecars_parse_and_match_frames(self, tmp_path):
        paths = gen_corpus(tmp_path, count=4, seed=3, size=(256, 192))
        assert len(paths) == 4
        for p in paths:
            frame = load_image(p)
            assert frame.shape == (192, 256, 3)
            gt = read_ground_truth(p.with_name(p.stem + ".gt.txt"))
            assert gt.frame_id == p.stem
            assert len(gt.blocks) >= 1
            for box in gt.blocks:
                assert box.right <= 256 and box.bottom <= 192

    def test_sidecar_comment_header(self, tmp_path):
        paths = gen_corpus(tmp_path, count=1, seed=1)
        sidecar = paths[0].with_name(paths[0].stem + ".gt.txt")
        text = sidecar.read_text()
        assert text.startswith("# ground truth for frame_000.ppm")
        assert read_boxes(sidecar)  # comment line is ignored by the parser

    def test_count_validation(self, tmp_path):
        with pytest.raises(ValueError):
            gen_corpus(tmp_path, count=0, seed=0)
