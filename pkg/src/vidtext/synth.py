"""Synthetic benchmark frames: text lines over textured backgrounds.

Glyphs come from a small built-in segment font. Every stroke is axis
aligned with a constant 2-pixel thickness, glyph height scales through a
unit size, and enough glyphs carry enclosed counters (O, A, P, 8, ...)
for the loop-based candidate stage to find anchors in every line. Mild
per-pixel noise keeps gradients nonzero everywhere, the way camera
frames behave. All randomness flows through one generator, so a fixed
seed reproduces the corpus byte for byte.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np
from scipy import ndimage

from .raster import BBox, save_rgb

STROKE = 2  # pixel thickness of every glyph stroke

# Glyph grid is 4 units wide, 6 tall; segments are (x1, y1, x2, y2) with
# either x1 == x2 (vertical) or y1 == y2 (horizontal).
_G = {
    "O": [(0, 0, 4, 0), (0, 6, 4, 6), (0, 0, 0, 6), (4, 0, 4, 6)],
    "A": [(0, 0, 4, 0), (0, 3, 4, 3), (0, 0, 0, 6), (4, 0, 4, 6)],
    "P": [(0, 0, 4, 0), (0, 3, 4, 3), (0, 0, 0, 6), (4, 0, 4, 3)],
    "8": [(0, 0, 4, 0), (0, 3, 4, 3), (0, 6, 4, 6), (0, 0, 0, 6), (4, 0, 4, 6)],
    "6": [(0, 3, 4, 3), (0, 6, 4, 6), (0, 0, 0, 6), (4, 3, 4, 6)],
    "9": [(0, 0, 4, 0), (0, 3, 4, 3), (0, 0, 0, 3), (4, 0, 4, 6)],
    "0": [(0, 0, 4, 0), (0, 6, 4, 6), (0, 0, 0, 6), (4, 0, 4, 6)],
    "C": [(0, 0, 4, 0), (0, 6, 4, 6), (0, 0, 0, 6)],
    "E": [(0, 0, 4, 0), (0, 3, 4, 3), (0, 6, 4, 6), (0, 0, 0, 6)],
    "F": [(0, 0, 4, 0), (0, 3, 4, 3), (0, 0, 0, 6)],
    "H": [(0, 3, 4, 3), (0, 0, 0, 6), (4, 0, 4, 6)],
    "I": [(2, 0, 2, 6)],
    "J": [(0, 6, 4, 6), (4, 0, 4, 6)],
    "L": [(0, 6, 4, 6), (0, 0, 0, 6)],
    "T": [(0, 0, 4, 0), (2, 0, 2, 6)],
    "U": [(0, 6, 4, 6), (0, 0, 0, 6), (4, 0, 4, 6)],
    "7": [(0, 0, 4, 0), (4, 0, 4, 6)],
    "1": [(2, 0, 2, 6)],
    "4": [(0, 3, 4, 3), (0, 0, 0, 3), (4, 0, 4, 6)],
}

LOOP_GLYPHS = "OAP8690"
OPEN_GLYPHS = "CEFHIJLTU714"


def render_glyph(char: str, unit: int) -> np.ndarray:
    """Rasterize one glyph as a (6*unit, 4*unit) bool mask."""
    if char not in _G:
        raise KeyError(f"no glyph for {char!r}")
    if unit < 2:
        raise ValueError(f"unit must be >= 2, got {unit}")
    height, width = 6 * unit, 4 * unit
    g = np.zeros((height, width), dtype=bool)
    for x1, y1, x2, y2 in _G[char]:
        xa = _offset(min(x1, x2), unit, width)
        ya = _offset(min(y1, y2), unit, height)
        if x1 == x2:
            yb = _offset(max(y1, y2), unit, height)
            g[ya : yb + STROKE, xa : xa + STROKE] = True
        else:
            xb = _offset(max(x1, x2), unit, width)
            g[ya : ya + STROKE, xa : xb + STROKE] = True
    return g


def _offset(coord: int, unit: int, span: int) -> int:
    # Strokes at the far edge are placed inward so the glyph stays inside
    # its nominal cell.
    return min(coord * unit, span - STROKE)


def render_line(text: str, unit: int) -> np.ndarray:
    """Rasterize a string with a (unit + 1)-pixel gap between glyphs."""
    glyphs = [render_glyph(ch, unit) for ch in text]
    gap = unit + 1
    width = sum(g.shape[1] for g in glyphs) + gap * (len(glyphs) - 1)
    out = np.zeros((6 * unit, width), dtype=bool)
    x = 0
    for g in glyphs:
        out[:, x : x + g.shape[1]] = g
        x += g.shape[1] + gap
    return out


def random_text(rng: np.random.Generator, length: int) -> str:
    """A glyph string with at least one loop-bearing character."""
    alphabet = LOOP_GLYPHS + OPEN_GLYPHS
    chars = [alphabet[rng.integers(len(alphabet))] for _ in range(length)]
    if not any(c in LOOP_GLYPHS for c in chars):
        pos = int(rng.integers(length))
        chars[pos] = LOOP_GLYPHS[rng.integers(len(LOOP_GLYPHS))]
    return "".join(chars)


def _background(rng: np.random.Generator, shape) -> np.ndarray:
    h, w = shape
    yy, xx = np.mgrid[0:h, 0:w].astype(np.float64)
    base = float(rng.uniform(45, 75))
    tilt_x = float(rng.uniform(-18, 18))
    tilt_y = float(rng.uniform(-18, 18))
    field = base + tilt_x * xx / max(w - 1, 1) + tilt_y * yy / max(h - 1, 1)
    grain = ndimage.gaussian_filter(
        rng.standard_normal((h, w)), sigma=float(rng.uniform(4, 8))
    )
    peak = np.abs(grain).max()
    if peak > 0:
        field += grain / peak * float(rng.uniform(6, 16))
    return np.clip(field, 30, 115)


def render_frame(
    rng: np.random.Generator, size=(320, 240)
) -> tuple[np.ndarray, list[BBox]]:
    """One RGB frame plus the tight box of every rendered text line."""
    w, h = size
    if w < 96 or h < 96:
        raise ValueError(f"frame size {w}x{h} is too small for text layout")
    base = _background(rng, (h, w))
    frame = np.empty((h, w, 3), dtype=np.uint8)
    for c in range(3):
        offset = float(rng.uniform(-8, 8))
        noise = rng.integers(-5, 6, size=(h, w))
        frame[:, :, c] = np.clip(base + offset + noise, 0, 255).astype(np.uint8)

    boxes: list[BBox] = []
    margin = 8
    placed: list[tuple[int, int]] = []  # (y0, line height)
    target_lines = int(rng.integers(1, 4))
    attempts = 0
    while len(boxes) < target_lines and attempts < 40:
        attempts += 1
        unit = int(rng.integers(2, 5))
        line_h = 6 * unit
        text = random_text(rng, int(rng.integers(4, 9)))
        line = render_line(text, unit)
        if line.shape[1] > w - 2 * margin:
            continue
        y0 = int(rng.integers(margin, h - margin - line_h + 1))
        # Keep lines far enough apart that growing one cannot reach the
        # next: the absorption budget is one seed height.
        if any(
            abs(y0 - py) < 2.4 * max(line_h, ph) for py, ph in placed
        ):
            continue
        x0 = int(rng.integers(margin, w - margin - line.shape[1] + 1))
        level = float(rng.uniform(185, 240))
        for c in range(3):
            offset = float(rng.uniform(-10, 10))
            noise = rng.integers(-7, 8, size=line.shape)
            channel = frame[y0 : y0 + line_h, x0 : x0 + line.shape[1], c]
            values = np.clip(level + offset + noise, 0, 255).astype(np.uint8)
            channel[line] = values[line]
        ys, xs = np.nonzero(line)
        boxes.append(
            BBox.around(xs + x0, ys + y0)
        )
        placed.append((y0, line_h))
    if not boxes:  # pragma: no cover - layout always fits at default sizes
        raise RuntimeError("failed to place any text line")
    boxes.sort(key=lambda b: (b.y, b.x))
    return frame, boxes


def gen_corpus(out_dir, count: int, seed: int, size=(320, 240)) -> list[Path]:
    """Write ``count`` frames plus ``.gt.txt`` sidecars; returns frame paths.

    The same seed always reproduces identical files.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    paths = []
    for i in range(count):
        frame, boxes = render_frame(rng, size)
        name = f"frame_{i:03d}"
        frame_path = out / f"{name}.ppm"
        save_rgb(frame, frame_path)
        lines = [f"# ground truth for {name}.ppm\n"]
        lines += [f"{b.x} {b.y} {b.w} {b.h}\n" for b in boxes]
        (out / f"{name}.gt.txt").write_text("".join(lines), encoding="ascii")
        paths.append(frame_path)
    return paths
