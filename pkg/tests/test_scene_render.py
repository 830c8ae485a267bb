from __future__ import annotations

import numpy as np
import pytest

from puzzlebench.render import (
    decode_png,
    emit_svg,
    encode_png,
    parse_svg,
    rasterize,
)
from puzzlebench.scene import (
    PALETTE,
    Circle,
    Line,
    Polygon,
    Polyline,
    Rect,
    Scene,
    Text,
    color_distance,
)


def _corpus(n=20) -> list[Scene]:
    """Synthetic scenes exercising every primitive type."""
    rng = np.random.default_rng(7)
    names = [k for k in PALETTE if k != "white"]
    scenes = []
    for _ in range(n):
        sc = Scene(40.0, 30.0)
        for _ in range(rng.integers(3, 9)):
            kind = rng.integers(0, 6)
            col = names[rng.integers(0, len(names))]
            x, y = rng.uniform(2, 34), rng.uniform(2, 24)
            if kind == 0:
                sc.add(Rect(x, y, rng.uniform(1, 6), rng.uniform(1, 6), fill=col,
                            stroke="black", stroke_width=0.3))
            elif kind == 1:
                sc.add(Circle(x, y, rng.uniform(0.5, 4), fill=col))
            elif kind == 2:
                sc.add(Line(x, y, x + rng.uniform(-5, 5), y + rng.uniform(-5, 5),
                            color=col, width=0.4))
            elif kind == 3:
                pts = tuple((x + rng.uniform(-4, 4), y + rng.uniform(-4, 4))
                            for _ in range(4))
                sc.add(Polyline(pts, color=col, width=0.5))
            elif kind == 4:
                k = int(rng.integers(3, 7))
                ang = rng.uniform(0, 2 * np.pi)
                pts = tuple((x + 3 * np.cos(ang + 2 * np.pi * t / k),
                             y + 3 * np.sin(ang + 2 * np.pi * t / k))
                            for t in range(k))
                sc.add(Polygon(pts, fill=col))
            else:
                sc.add(Text(x, y, "A1?", size=3.0, color=col))
        scenes.append(sc)
    return scenes


def test_palette_verifier_separation():
    # colors that share a verifier classification context must stay far apart
    from puzzlebench.scene import (
        CA_STATE_COLORS,
        PORTAL_COLORS,
        STYLE,
        SYMBOL_COLORS,
        rgb,
    )

    groups = [
        list(CA_STATE_COLORS),
        list(SYMBOL_COLORS) + ["white", "gray"],
        ["blue", "dark_green", "red", "white", "black"] + list(PORTAL_COLORS),
        ["green", "red", "white"],
    ]
    tol = STYLE["color_tolerance"]
    for grp in groups:
        for i, a in enumerate(grp):
            for b in grp[i + 1:]:
                d = color_distance(rgb(a), rgb(b))
                assert d >= STYLE["min_verifier_color_distance"], (a, b, d)
                assert tol < d / 2, (a, b, d)


def test_empty_scene_is_background_white():
    img = rasterize(Scene(10, 10), 512)
    assert img.width == img.height == 512
    assert np.all(img.rgb == 255)
    assert np.all(img.pixels[:, :, 3] == 255)


def test_full_canvas_rect_is_black():
    sc = Scene(10, 10)
    sc.add(Rect(0, 0, 10, 10, fill="black"))
    img = rasterize(sc, 512)
    black = np.all(img.rgb == 0, axis=2).mean()
    assert black >= 0.99


def test_rasterize_deterministic():
    sc = _corpus(1)[0]
    a = rasterize(sc, 512)
    b = rasterize(sc, 512)
    assert np.array_equal(a.pixels, b.pixels)


def test_rasterize_rejects_unknown_resolution():
    with pytest.raises(ValueError):
        rasterize(Scene(10, 10), 640)


def test_non_square_scene_centered_with_margins():
    sc = Scene(20, 10)
    sc.add(Rect(0, 0, 20, 10, fill="navy"))
    img = rasterize(sc, 512)
    # top and bottom margins stay background
    assert np.all(img.rgb[:120, :] == 255)
    assert np.all(img.rgb[-120:, :] == 255)
    assert np.all(img.rgb[256, :] == PALETTE["navy"])


def test_png_round_trip():
    sc = _corpus(3)[2]
    img = rasterize(sc, 512)
    data = encode_png(img)
    assert data[:8] == b"\x89PNG\r\n\x1a\n"
    back = decode_png(data)
    assert np.array_equal(back.pixels, img.pixels)


def test_png_declares_dimensions():
    img = rasterize(Scene(8, 8), 512)
    data = encode_png(img)
    w = int.from_bytes(data[16:20], "big")
    h = int.from_bytes(data[20:24], "big")
    assert (w, h) == (512, 512)


def test_svg_contains_one_circle_element():
    sc = Scene(10, 10)
    sc.add(Circle(5, 5, 2, fill="red"))
    svg = emit_svg(sc)
    assert svg.count("<circle") == 1


def test_svg_deterministic():
    a, b = _corpus(2)
    assert emit_svg(a) == emit_svg(a)
    assert emit_svg(a) != emit_svg(b)


def test_svg_parse_rasterize_matches_direct_over_corpus():
    for sc in _corpus(20):
        direct = rasterize(sc, 512)
        via_svg = rasterize(parse_svg(emit_svg(sc)), 512)
        assert np.array_equal(direct.pixels, via_svg.pixels)


def test_text_renders_visibly():
    sc = Scene(20, 10)
    sc.add(Text(10, 5, "LAYER 1", size=4, color="black"))
    img = rasterize(sc, 512)
    assert np.any(np.all(img.rgb == 0, axis=2))


def test_backends_agree_exactly():
    from puzzlebench._kernels import numba_impl, numpy_impl

    rng = np.random.default_rng(3)
    for trial in range(5):
        a = np.full((200, 200, 3), 255, dtype=np.uint8)
        b = a.copy()
        cx, cy, r = rng.uniform(20, 180), rng.uniform(20, 180), rng.uniform(3, 40)
        numpy_impl.fill_circle(a, cx, cy, r, 10, 20, 30)
        numba_impl.fill_circle(b, cx, cy, r, 10, 20, 30)
        numpy_impl.fill_ring(a, cx, cy, r * 0.5, r, 1, 2, 3)
        numba_impl.fill_ring(b, cx, cy, r * 0.5, r, 1, 2, 3)
        x1, y1, x2, y2 = rng.uniform(10, 190, 4)
        numpy_impl.fill_capsule(a, x1, y1, x2, y2, 4.5, 99, 98, 97)
        numba_impl.fill_capsule(b, x1, y1, x2, y2, 4.5, 99, 98, 97)
        xs = rng.uniform(10, 190, 7)
        ys = rng.uniform(10, 190, 7)
        numpy_impl.fill_polygon(a, xs, ys, 7, 8, 9)
        numba_impl.fill_polygon(b, xs, ys, 7, 8, 9)
        assert np.array_equal(a, b), f"trial {trial}"

    img = rng.integers(0, 256, (64, 64, 3), dtype=np.uint8)
    classes = np.array([[0, 0, 0], [255, 255, 255], [255, 0, 0]], dtype=np.int32)
    assert np.array_equal(numpy_impl.classify_image(img, classes, 60 * 60),
                          numba_impl.classify_image(img, classes, 60 * 60))

    grid = rng.integers(0, 4, (16, 16)).astype(np.int16)
    table = rng.integers(0, 4, (4, 4)).astype(np.int16)
    assert np.array_equal(numpy_impl.ca_step(grid, table),
                          numba_impl.ca_step(grid, table))

    f = rng.random((40, 40))
    k = rng.random(11)
    assert np.array_equal(numpy_impl.conv_valid_sep(f, k),
                          numba_impl.conv_valid_sep(f, k))
