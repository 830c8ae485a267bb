from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from puzzlebench.render import RasterImage, rasterize
from puzzlebench.scene import SYMBOL_COLORS, Circle, Polyline, Rect, Scene, rgb
from puzzlebench.vision import (
    GridGeometry,
    class_array,
    classify_color,
    count_answer_pixels,
    extract_path_cells,
    grid_geometry,
    sample_grid,
    ssim,
)

STYLE_PATH = Path(__file__).resolve().parents[1] / "src" / "puzzlebench" / "data" / "style.json"


def _img(arr3: np.ndarray) -> RasterImage:
    h, w, _ = arr3.shape
    px = np.empty((h, w, 4), dtype=np.uint8)
    px[:, :, :3] = arr3
    px[:, :, 3] = 255
    return RasterImage(pixels=px)


def test_classify_exact_palette_color():
    classes = class_array(["red", "green", "blue"])
    assert classify_color(rgb("green"), classes) == 1


def test_classify_far_color_is_unknown():
    classes = class_array(["red", "green"])
    assert classify_color((30, 30, 160), classes) == -1


def test_classify_midpoint_tie_breaks_low():
    # Exact midpoints of palette pairs sit at distance >= 63.5, so under
    # the shipped tolerance of 60 no pixel can ever be ambiguous; the
    # deterministic tie-break is exercised with a wider tolerance.
    doc = json.loads(STYLE_PATH.read_text())
    a = np.array(doc["palette"]["maroon"])
    b = np.array(doc["palette"]["olive"])
    mid = tuple(((a + b) // 2).tolist())  # (128, 64, 0), equidistant
    classes = class_array(["maroon", "olive"])
    assert classify_color(mid, classes, tolerance=60) == -1
    assert classify_color(mid, classes, tolerance=70) == 0
    classes_rev = class_array(["olive", "maroon"])
    assert classify_color(mid, classes_rev, tolerance=70) == 0


def _symbol_scene(matrix: np.ndarray) -> tuple[Scene, tuple]:
    n = matrix.shape[0]
    sc = Scene(n + 2.0, n + 2.0)
    for r in range(n):
        for c in range(n):
            sc.add(Rect(1 + c, 1 + r, 1, 1, fill=SYMBOL_COLORS[matrix[r, c]]))
    layout = ((1.0, 1.0), 1.0, n, n)
    return sc, layout


@pytest.mark.parametrize("mode", ["center", "patch", "vote"])
def test_sample_grid_round_trip(mode):
    rng = np.random.default_rng(11)
    matrix = rng.integers(0, 4, (4, 4))
    sc, (origin, cell, rows, cols) = _symbol_scene(matrix)
    img = rasterize(sc, 512)
    geom = grid_geometry(sc.width, sc.height, 512, origin, cell, rows, cols)
    got = sample_grid(img, geom, list(SYMBOL_COLORS[:4]), mode=mode)
    assert np.array_equal(got, matrix)


def test_sample_grid_blank_is_unknown():
    img = rasterize(Scene(6, 6), 512)
    geom = grid_geometry(6, 6, 512, (1, 1), 1, 4, 4)
    got = sample_grid(img, geom, list(SYMBOL_COLORS[:4]), mode="patch")
    assert np.all(got == -1)


def test_sample_grid_resolution_invariant():
    rng = np.random.default_rng(5)
    matrix = rng.integers(0, 6, (5, 5))
    sc, (origin, cell, rows, cols) = _symbol_scene(matrix)
    results = []
    for res in (512, 1024, 2048):
        geom = grid_geometry(sc.width, sc.height, res, origin, cell, rows, cols)
        results.append(sample_grid(rasterize(sc, res), geom,
                                   list(SYMBOL_COLORS[:6]), mode="vote"))
    assert np.array_equal(results[0], results[1])
    assert np.array_equal(results[1], results[2])


def test_ssim_identity_is_exactly_one():
    sc, _ = _symbol_scene(np.arange(16).reshape(4, 4) % 6)
    img = rasterize(sc, 512)
    assert ssim(img, img) == 1.0


def test_ssim_symmetric():
    sc1, _ = _symbol_scene(np.zeros((4, 4), dtype=int))
    sc2, _ = _symbol_scene(np.ones((4, 4), dtype=int))
    a, b = rasterize(sc1, 512), rasterize(sc2, 512)
    assert abs(ssim(a, b) - ssim(b, a)) < 1e-9


def test_ssim_white_vs_black_strongly_negative_region():
    white = _img(np.full((128, 128, 3), 255, dtype=np.uint8))
    black = _img(np.zeros((128, 128, 3), dtype=np.uint8))
    assert ssim(white, black) < 0.05


def test_ssim_dimension_mismatch():
    a = _img(np.zeros((64, 64, 3), dtype=np.uint8))
    b = _img(np.zeros((128, 128, 3), dtype=np.uint8))
    with pytest.raises(ValueError):
        ssim(a, b)


def test_ssim_matches_skimage_reference():
    from skimage.metrics import structural_similarity

    rng = np.random.default_rng(17)
    for _ in range(4):
        a = _img(rng.integers(0, 256, (96, 96, 3), dtype=np.uint8))
        # correlated second image so scores span a useful range
        noise = rng.integers(-12, 13, (96, 96, 3))
        b = _img(np.clip(a.rgb.astype(int) + noise, 0, 255).astype(np.uint8))
        ya = (0.299 * a.rgb[..., 0] + 0.587 * a.rgb[..., 1] + 0.114 * a.rgb[..., 2])
        yb = (0.299 * b.rgb[..., 0] + 0.587 * b.rgb[..., 1] + 0.114 * b.rgb[..., 2])
        ref = structural_similarity(ya, yb, win_size=11, gaussian_weights=True,
                                    sigma=1.5, use_sample_covariance=False,
                                    data_range=255)
        assert abs(ssim(a, b) - ref) < 1e-9


def test_count_answer_pixels():
    yes = Scene(10, 10)
    yes.add(Circle(5, 5, 4, fill="green"))
    g, r = count_answer_pixels(rasterize(yes, 512))
    assert g > 100 and g > 10 * max(r, 1)

    no = Scene(10, 10)
    no.add(Circle(5, 5, 4, fill="red"))
    g, r = count_answer_pixels(rasterize(no, 512))
    assert r > 100 and r > 10 * max(g, 1)

    g, r = count_answer_pixels(rasterize(Scene(10, 10), 512))
    assert (g, r) == (0, 0)


def test_extract_path_cells_round_trip():
    # a path through known cells of a 6x6 grid
    sc = Scene(8, 8)
    cells = [(0, 0), (0, 1), (1, 1), (2, 1), (2, 2), (2, 3)]
    pts = tuple((1 + c + 0.5, 1 + r + 0.5) for r, c in cells)
    sc.add(Polyline(pts, color="blue", width=0.35))
    img = rasterize(sc, 512)
    geom = grid_geometry(8, 8, 512, (1, 1), 1, 6, 6)
    got = extract_path_cells(img, [geom])
    assert got == {(0, r, c) for r, c in cells}


def test_extract_path_cells_empty_without_blue():
    img = rasterize(Scene(8, 8), 512)
    geom = grid_geometry(8, 8, 512, (1, 1), 1, 6, 6)
    assert extract_path_cells(img, [geom]) == set()


def test_extract_path_cells_corner_touch_excluded():
    # a stroke clipping only the corner of cell (0,1) must not claim it
    sc = Scene(8, 8)
    sc.add(Polyline(((1.0, 2.0), (2.0, 1.0)), color="blue", width=0.2))
    img = rasterize(sc, 512)
    geom = grid_geometry(8, 8, 512, (1, 1), 1, 2, 2)
    got = extract_path_cells(img, [geom])
    assert (0, 0, 1) not in got and (0, 1, 0) not in got


def test_grid_geometry_centers():
    geom = GridGeometry(10.0, 20.0, 8.0, 8.0, 4, 4)
    assert geom.center(0, 0) == (14.0, 24.0)
    assert geom.center(3, 2) == (30.0, 48.0)
