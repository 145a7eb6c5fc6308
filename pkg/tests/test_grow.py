from __future__ import annotations

import numpy as np
import pytest

from oracles import chessboard_gap_oracle
from vidtext.grow import (
    GrowParams,
    TextBlock,
    edge_map,
    edge_map_from_gradient,
    otsu_threshold,
    region_grow,
    segment,
)
from vidtext.morphology import label_components
from vidtext.raster import BBox
from vidtext.stroke import sobel


def component_at(mask):
    comps = label_components(mask)
    assert len(comps) == 1
    return comps[0]


def blob_seed(x, y, w, h, shape):
    m = np.zeros(shape, dtype=bool)
    m[y:y + h, x:x + w] = True
    return component_at(m)


class TestOtsu:
    def test_bimodal_split(self):
        vals = np.concatenate([np.zeros(60), np.full(40, 200.0)])
        th = otsu_threshold(vals)
        assert 0 < th <= 200
        assert np.array_equal(vals >= th, vals == 200.0)

    def test_all_zero(self):
        assert otsu_threshold(np.zeros(30)) == 0.0

    def test_three_level(self):
        vals = np.concatenate([np.zeros(50), np.full(10, 90.0), np.full(40, 210.0)])
        th = otsu_threshold(vals)
        assert 0 < th <= 210


class TestEdgeMap:
    def test_constant_image_empty(self):
        img = np.full((8, 8), 120, dtype=np.uint8)
        assert not edge_map(img).any()
        assert not edge_map(img, threshold=0).any()

    def test_step_edge_band(self):
        img = np.zeros((6, 10), dtype=np.uint8)
        img[:, 5:] = 255
        for threshold in (None, 100.0):
            edges = edge_map(img, threshold=threshold)
            assert edges[:, 4].all() and edges[:, 5].all()
            assert not edges[:, :4].any() and not edges[:, 6:].any()

    def test_threshold_zero_keeps_all_nonzero_magnitude(self):
        rng = np.random.default_rng(26)
        img = rng.integers(0, 256, size=(9, 9), dtype=np.uint8)
        grad = sobel(img)
        edges = edge_map_from_gradient(grad, threshold=0.0)
        assert np.array_equal(edges, grad.magnitude > 0)

    def test_negative_threshold_rejected(self):
        img = np.zeros((5, 5), dtype=np.uint8)
        with pytest.raises(ValueError):
            edge_map(img, threshold=-1.0)

    def test_tiny_image_rejected(self):
        with pytest.raises(ValueError):
            edge_map(np.zeros((2, 2), dtype=np.uint8))


def three_blob_row(shape=(12, 26)):
    """Three 5x5 blobs: x in 2..6, 10..14, 18..22; pixel gaps of 4."""
    edges = np.zeros(shape, dtype=bool)
    for x in (2, 10, 18):
        edges[3:8, x:x + 5] = True
    return edges


class TestRegionGrow:
    def test_absorbs_whole_row_within_budget(self):
        edges = three_blob_row()
        seed = blob_seed(10, 3, 5, 5, edges.shape)
        block = region_grow(seed, edges, GrowParams(spacing_factor=2.0))
        assert block.bbox == BBox(2, 3, 21, 5)
        assert len(block.members) == 3

    def test_budget_below_gap_keeps_seed_component_only(self):
        edges = three_blob_row()
        seed = blob_seed(10, 3, 5, 5, edges.shape)
        block = region_grow(seed, edges, GrowParams(spacing_factor=0.4))
        assert block.bbox == BBox(10, 3, 5, 5)
        assert len(block.members) == 1

    def test_absorption_is_transitive_along_the_row(self):
        # seed at one end still reaches the far blob through the middle
        edges = three_blob_row()
        seed = blob_seed(2, 3, 5, 5, edges.shape)
        block = region_grow(seed, edges, GrowParams(spacing_factor=2.0))
        assert block.bbox == BBox(2, 3, 21, 5)

    def test_parallel_row_out_of_budget_stays_out(self):
        edges = np.zeros((30, 26), dtype=bool)
        edges[3:8, 2:24] = True
        edges[20:25, 2:24] = True  # second line, 12 px away
        seed = blob_seed(2, 3, 22, 5, edges.shape)
        block = region_grow(seed, edges, GrowParams(spacing_factor=1.0))
        assert block.bbox == BBox(2, 3, 22, 5)

    def test_horizontal_mode_excludes_offset_rows(self):
        edges = np.zeros((22, 30), dtype=bool)
        edges[3:8, 2:7] = True
        edges[10:15, 4:9] = True  # nearby but on disjoint rows
        seed = blob_seed(2, 3, 5, 5, edges.shape)
        grown = region_grow(seed, edges, GrowParams(spacing_factor=2.0))
        assert len(grown.members) == 2  # nearest mode takes it
        locked = region_grow(
            seed, edges, GrowParams(spacing_factor=2.0, direction_mode="horizontal")
        )
        assert len(locked.members) == 1
        assert locked.bbox == BBox(2, 3, 5, 5)

    def test_horizontal_mode_keeps_same_row_neighbors(self):
        edges = three_blob_row()
        seed = blob_seed(10, 3, 5, 5, edges.shape)
        block = region_grow(
            seed, edges, GrowParams(spacing_factor=2.0, direction_mode="horizontal")
        )
        assert len(block.members) == 3

    def test_seed_without_edge_overlap_degenerates(self):
        edges = np.zeros((12, 12), dtype=bool)
        edges[8:10, 8:10] = True
        seed = blob_seed(1, 1, 3, 3, edges.shape)
        block = region_grow(seed, edges, GrowParams(spacing_factor=1.0))
        assert block.members == []
        assert block.bbox == seed.bbox
        assert block.seed_id == seed.id

    def test_spacing_monotonicity(self):
        rng = np.random.default_rng(27)
        for _ in range(10):
            edges = rng.random((20, 20)) < 0.25
            if not edges.any():
                continue
            ys, xs = np.nonzero(edges)
            seed_mask = np.zeros_like(edges)
            seed_mask[ys[0], xs[0]] = True
            seed = component_at(seed_mask)
            prev_area = 0
            for spacing in (0.5, 1.0, 2.0, 4.0):
                block = region_grow(seed, edges, GrowParams(spacing_factor=spacing))
                assert block.bbox.area >= prev_area
                prev_area = block.bbox.area

    def test_gap_rule_matches_brute_force_distance(self):
        # absorption flips exactly when the budget crosses the true pairwise
        # chessboard distance between the two components
        rng = np.random.default_rng(28)
        for _ in range(12):
            edges = np.zeros((24, 24), dtype=bool)
            edges[2:7, 2:7] = True
            dx, dy = int(rng.integers(8, 16)), int(rng.integers(-6, 10))
            x2, y2 = 2 + dx, max(0, 2 + dy)
            edges[y2:y2 + 4, x2:x2 + 4] = True
            comps = label_components(edges)
            if len(comps) != 2:
                continue
            gap = chessboard_gap_oracle(comps[0].pixels, comps[1].pixels)
            seed = blob_seed(2, 2, 5, 5, edges.shape)
            h = seed.bbox.h
            under = region_grow(seed, edges, GrowParams(spacing_factor=(gap - 0.5) / h))
            over = region_grow(seed, edges, GrowParams(spacing_factor=(gap + 0.5) / h))
            assert len(under.members) == 1
            assert len(over.members) == 2


class TestSegment:
    def test_two_seeds_one_line_merge(self):
        edges = three_blob_row()
        seeds = [
            blob_seed(2, 3, 5, 5, edges.shape),
            blob_seed(18, 3, 5, 5, edges.shape),
        ]
        blocks = segment(seeds, edges, GrowParams(spacing_factor=2.0))
        assert len(blocks) == 1
        assert blocks[0].bbox == BBox(2, 3, 21, 5)

    def test_two_lines_stay_apart(self):
        edges = np.zeros((40, 30), dtype=bool)
        edges[3:8, 2:26] = True
        edges[25:30, 4:28] = True
        seeds = [blob_seed(2, 3, 5, 5, edges.shape), blob_seed(4, 25, 5, 5, edges.shape)]
        blocks = segment(seeds, edges, GrowParams(spacing_factor=1.0))
        assert len(blocks) == 2
        assert blocks[0].bbox.intersection_area(blocks[1].bbox) == 0

    def test_output_sorted_top_then_left(self):
        edges = np.zeros((40, 40), dtype=bool)
        edges[30:34, 2:10] = True
        edges[3:7, 20:28] = True
        edges[3:7, 2:10] = True
        seeds = [
            blob_seed(2, 30, 8, 4, edges.shape),
            blob_seed(20, 3, 8, 4, edges.shape),
            blob_seed(2, 3, 8, 4, edges.shape),
        ]
        blocks = segment(seeds, edges, GrowParams(spacing_factor=0.5))
        keys = [(b.bbox.y, b.bbox.x) for b in blocks]
        assert keys == sorted(keys)

    def test_pairwise_overlap_bounded_after_merge(self):
        rng = np.random.default_rng(29)
        for _ in range(8):
            edges = rng.random((30, 30)) < 0.2
            comps = label_components(edges)
            if len(comps) < 2:
                continue
            seeds = comps[:4]
            blocks = segment(seeds, edges, GrowParams(spacing_factor=1.0))
            for i, a in enumerate(blocks):
                for b in blocks[i + 1:]:
                    inter = a.bbox.intersection_area(b.bbox)
                    smaller = min(a.bbox.area, b.bbox.area)
                    assert inter * 2 <= smaller

    def test_blocks_stay_in_bounds(self):
        rng = np.random.default_rng(30)
        edges = rng.random((18, 25)) < 0.3
        comps = label_components(edges)
        blocks = segment(comps[:3], edges, GrowParams(spacing_factor=2.0))
        for b in blocks:
            assert 0 <= b.bbox.x and 0 <= b.bbox.y
            assert b.bbox.right <= 25 and b.bbox.bottom <= 18
            assert b.bbox.w >= 1 and b.bbox.h >= 1

    def test_empty_representatives(self):
        edges = np.zeros((8, 8), dtype=bool)
        assert segment([], edges, GrowParams()) == []


class TestGrowParams:
    def test_validation(self):
        with pytest.raises(ValueError):
            GrowParams(spacing_factor=0)
        with pytest.raises(ValueError):
            GrowParams(spacing_factor=-1.0)
        with pytest.raises(ValueError):
            GrowParams(direction_mode="diagonal")

    def test_defaults(self):
        p = GrowParams()
        assert p.spacing_factor == 1.0
        assert p.direction_mode == "nearest"
        assert p.edge_threshold is None
