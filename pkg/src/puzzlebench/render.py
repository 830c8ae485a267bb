"""Deterministic rasterization and scene serialization.

Scenes are rasterized into a square canvas at one of the three canonical
resolutions through 4x supersampling (a 2x2 subpixel grid, box filter).
Every subpixel takes the color of the topmost primitive covering its
center, so repeated rasterization is byte-identical.  The same scene can
be emitted as standalone SVG; parsing that SVG back and rasterizing it
reproduces the direct rasterization pixel for pixel (text is expanded to
stroke polylines before emission, so no font is ever needed).
"""

from __future__ import annotations

import io
import math
import xml.etree.ElementTree as etree
from dataclasses import dataclass, field

import numpy as np
from PIL import Image

from puzzlebench import _kernels
from puzzlebench.font import text_strokes
from puzzlebench.scene import (
    BACKGROUND,
    PALETTE,
    RESOLUTIONS,
    STYLE,
    Circle,
    Line,
    Polygon,
    Polyline,
    Rect,
    Scene,
    Text,
    rgb,
)

_SS = int(STYLE["supersample"])
_NAME_BY_RGB = {tuple(v): k for k, v in reversed(list(PALETTE.items()))}


@dataclass(eq=False)
class RasterImage:
    """Row-major RGBA pixel grid at a canonical square resolution."""

    pixels: np.ndarray  # (H, W, 4) uint8

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def rgb(self) -> np.ndarray:
        return self.pixels[:, :, :3]


def scene_transform(scene_w: float, scene_h: float, resolution: int):
    """Scale and offsets mapping scene units into a centered square canvas."""
    scale = resolution / max(scene_w, scene_h)
    ox = (resolution - scene_w * scale) / 2.0
    oy = (resolution - scene_h * scale) / 2.0
    return scale, ox, oy


def _axis_slice(lo: float, hi: float, n: int) -> tuple[int, int]:
    # pixels whose centers fall in [lo, hi)
    a = max(0, math.ceil(lo - 0.5))
    b = min(n, math.ceil(hi - 0.5))
    return a, b


def rasterize(scene: Scene, resolution: int) -> RasterImage:
    if resolution not in RESOLUTIONS:
        raise ValueError(f"resolution must be one of {RESOLUTIONS}, got {resolution}")
    scale, ox, oy = scene_transform(scene.width, scene.height, resolution)
    s = scale * _SS
    tx = ox * _SS
    ty = oy * _SS
    side = resolution * _SS
    buf = np.empty((side, side, 3), dtype=np.uint8)
    buf[:, :] = rgb(BACKGROUND)

    def capsule(x1, y1, x2, y2, width, color):
        c = rgb(color)
        _kernels.fill_capsule(buf, x1 * s + tx, y1 * s + ty, x2 * s + tx,
                              y2 * s + ty, width * s / 2.0, c[0], c[1], c[2])

    for item in scene.items:
        if isinstance(item, Text):
            for stroke in text_strokes(item):
                _draw_polyline(stroke, capsule)
        elif isinstance(item, Rect):
            if item.fill is not None:
                x0 = item.x * s + tx
                y0 = item.y * s + ty
                x1 = (item.x + item.w) * s + tx
                y1 = (item.y + item.h) * s + ty
                j0, j1 = _axis_slice(x0, x1, side)
                i0, i1 = _axis_slice(y0, y1, side)
                buf[i0:i1, j0:j1] = rgb(item.fill)
            if item.stroke is not None:
                xs = (item.x, item.x + item.w, item.x + item.w, item.x, item.x)
                ys = (item.y, item.y, item.y + item.h, item.y + item.h, item.y)
                for k in range(4):
                    capsule(xs[k], ys[k], xs[k + 1], ys[k + 1],
                            item.stroke_width, item.stroke)
        elif isinstance(item, Circle):
            if item.fill is not None:
                c = rgb(item.fill)
                _kernels.fill_circle(buf, item.cx * s + tx, item.cy * s + ty,
                                     item.r * s, c[0], c[1], c[2])
            if item.stroke is not None:
                c = rgb(item.stroke)
                hw = item.stroke_width * s / 2.0
                _kernels.fill_ring(buf, item.cx * s + tx, item.cy * s + ty,
                                   max(0.0, item.r * s - hw), item.r * s + hw,
                                   c[0], c[1], c[2])
        elif isinstance(item, Line):
            capsule(item.x1, item.y1, item.x2, item.y2, item.width, item.color)
        elif isinstance(item, Polyline):
            _draw_polyline(item, capsule)
        elif isinstance(item, Polygon):
            if item.fill is not None:
                c = rgb(item.fill)
                xs = np.array([p[0] * s + tx for p in item.points], dtype=np.float64)
                ys = np.array([p[1] * s + ty for p in item.points], dtype=np.float64)
                _kernels.fill_polygon(buf, xs, ys, c[0], c[1], c[2])
            if item.stroke is not None:
                pts = item.points + (item.points[0],)
                for k in range(len(pts) - 1):
                    capsule(pts[k][0], pts[k][1], pts[k + 1][0], pts[k + 1][1],
                            item.stroke_width, item.stroke)
        else:
            raise TypeError(f"unknown primitive {item!r}")

    return RasterImage(pixels=_downsample(buf))


def _draw_polyline(pl: Polyline, capsule) -> None:
    pts = pl.points
    if len(pts) == 1:
        capsule(pts[0][0], pts[0][1], pts[0][0], pts[0][1], pl.width, pl.color)
        return
    for k in range(len(pts) - 1):
        capsule(pts[k][0], pts[k][1], pts[k + 1][0], pts[k + 1][1], pl.width, pl.color)


def _downsample(buf: np.ndarray) -> np.ndarray:
    h, w, _ = buf.shape
    ho, wo = h // _SS, w // _SS
    acc = buf.reshape(ho, _SS, wo, _SS, 3).astype(np.uint16).sum(axis=(1, 3))
    n = _SS * _SS
    out = np.empty((ho, wo, 4), dtype=np.uint8)
    out[:, :, :3] = ((acc + n // 2) // n).astype(np.uint8)  # round half up
    out[:, :, 3] = 255
    return out


def encode_png(image: RasterImage) -> bytes:
    bio = io.BytesIO()
    Image.fromarray(image.pixels, mode="RGBA").save(bio, format="PNG")
    return bio.getvalue()


def decode_png(data: bytes) -> RasterImage:
    with Image.open(io.BytesIO(data)) as im:
        arr = np.asarray(im.convert("RGBA"), dtype=np.uint8)
    return RasterImage(pixels=arr.copy())


# ---------------------------------------------------------------------------
# SVG emission and parsing (the subset this package emits)
# ---------------------------------------------------------------------------

def _hex(color: str) -> str:
    r, g, b = rgb(color)
    return f"#{r:02x}{g:02x}{b:02x}"


def _f(v: float) -> str:
    return repr(float(v))


def _points_attr(points) -> str:
    return " ".join(f"{_f(x)},{_f(y)}" for x, y in points)


def emit_svg(scene: Scene) -> str:
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_f(scene.width)}" height="{_f(scene.height)}" '
        f'viewBox="0 0 {_f(scene.width)} {_f(scene.height)}">',
        f'<rect x="0" y="0" width="{_f(scene.width)}" height="{_f(scene.height)}" '
        f'fill="{_hex(BACKGROUND)}" stroke="none"/>',
    ]
    for item in scene.items:
        if isinstance(item, Text):
            for stroke in text_strokes(item):
                out.append(_polyline_svg(stroke))
        elif isinstance(item, Rect):
            out.append(
                f'<rect x="{_f(item.x)}" y="{_f(item.y)}" width="{_f(item.w)}" '
                f'height="{_f(item.h)}" fill="{_fill_attr(item.fill)}" '
                f'{_stroke_attrs(item.stroke, item.stroke_width)}/>')
        elif isinstance(item, Circle):
            out.append(
                f'<circle cx="{_f(item.cx)}" cy="{_f(item.cy)}" r="{_f(item.r)}" '
                f'fill="{_fill_attr(item.fill)}" '
                f'{_stroke_attrs(item.stroke, item.stroke_width)}/>')
        elif isinstance(item, Line):
            out.append(
                f'<line x1="{_f(item.x1)}" y1="{_f(item.y1)}" x2="{_f(item.x2)}" '
                f'y2="{_f(item.y2)}" {_stroke_attrs(item.color, item.width)}/>')
        elif isinstance(item, Polyline):
            out.append(_polyline_svg(item))
        elif isinstance(item, Polygon):
            out.append(
                f'<polygon points="{_points_attr(item.points)}" '
                f'fill="{_fill_attr(item.fill)}" '
                f'{_stroke_attrs(item.stroke, item.stroke_width)}/>')
    out.append("</svg>")
    return "\n".join(out)


def _polyline_svg(pl: Polyline) -> str:
    return (f'<polyline points="{_points_attr(pl.points)}" fill="none" '
            f'{_stroke_attrs(pl.color, pl.width)}/>')


def _fill_attr(fill: str | None) -> str:
    return _hex(fill) if fill is not None else "none"


def _stroke_attrs(stroke: str | None, width: float) -> str:
    if stroke is None:
        return 'stroke="none"'
    return (f'stroke="{_hex(stroke)}" stroke-width="{_f(width)}" '
            f'stroke-linecap="round" stroke-linejoin="round"')


def _color_name(value: str) -> str | None:
    if value == "none":
        return None
    v = value.lstrip("#")
    key = (int(v[0:2], 16), int(v[2:4], 16), int(v[4:6], 16))
    name = _NAME_BY_RGB.get(key)
    if name is None:
        raise ValueError(f"color {value} is not a palette color")
    return name


def _parse_points(attr: str) -> tuple:
    pts = []
    for pair in attr.split():
        xs, ys = pair.split(",")
        pts.append((float(xs), float(ys)))
    return tuple(pts)


def parse_svg(text: str) -> Scene:
    """Parse SVG produced by :func:`emit_svg` back into a Scene.

    Only the emitted element subset is supported; text comes back as the
    polylines it was expanded to, which rasterize identically.
    """
    root = etree.fromstring(text)
    scene = Scene(width=float(root.get("width")), height=float(root.get("height")))
    children = list(root)
    for el in children[1:]:  # children[0] is the background rect
        tag = el.tag.rsplit("}", 1)[-1]
        stroke = _color_name(el.get("stroke", "none"))
        sw = float(el.get("stroke-width", "0"))
        if tag == "rect":
            scene.add(Rect(float(el.get("x")), float(el.get("y")),
                           float(el.get("width")), float(el.get("height")),
                           fill=_color_name(el.get("fill")), stroke=stroke,
                           stroke_width=sw))
        elif tag == "circle":
            scene.add(Circle(float(el.get("cx")), float(el.get("cy")),
                             float(el.get("r")), fill=_color_name(el.get("fill")),
                             stroke=stroke, stroke_width=sw))
        elif tag == "line":
            scene.add(Line(float(el.get("x1")), float(el.get("y1")),
                           float(el.get("x2")), float(el.get("y2")),
                           color=stroke, width=sw))
        elif tag == "polyline":
            scene.add(Polyline(_parse_points(el.get("points")), color=stroke, width=sw))
        elif tag == "polygon":
            scene.add(Polygon(_parse_points(el.get("points")),
                              fill=_color_name(el.get("fill")), stroke=stroke,
                              stroke_width=sw))
        else:
            raise ValueError(f"unsupported SVG element <{tag}>")
    return scene
