"""Embedded monospace stroke font.

Labels are the only text on any puzzle, and they must rasterize
identically on every platform, so glyphs are defined here as polyline
strokes on a 4x6 design grid (y up, baseline 0) instead of relying on
system fonts.  ``text_strokes`` expands a Text primitive into plain
Polyline primitives; both the rasterizer and the SVG emitter consume
that expansion, which keeps the two pipelines pixel-identical.
"""

from __future__ import annotations

from puzzlebench.scene import Polyline, Text

# glyph -> tuple of strokes; stroke = tuple of (x, y) in design units
GLYPHS: dict[str, tuple[tuple[tuple[float, float], ...], ...]] = {
    "0": (((1, 0), (3, 0), (4, 1), (4, 5), (3, 6), (1, 6), (0, 5), (0, 1), (1, 0)),
          ((0.7, 1.2), (3.3, 4.8))),
    "1": (((1, 4.5), (2, 6), (2, 0)), ((1, 0), (3, 0))),
    "2": (((0, 5), (1, 6), (3, 6), (4, 5), (4, 3.5), (0, 0), (4, 0)),),
    "3": (((0, 6), (4, 6), (2, 3.5), (4, 2), (4, 1), (3, 0), (1, 0), (0, 1)),),
    "4": (((3, 0), (3, 6), (0, 2), (4, 2)),),
    "5": (((4, 6), (0, 6), (0, 3.5), (3, 3.5), (4, 2.5), (4, 1), (3, 0), (1, 0), (0, 1)),),
    "6": (((3.5, 6), (1, 6), (0, 5), (0, 1), (1, 0), (3, 0), (4, 1), (4, 2.5),
           (3, 3.5), (0, 3.5)),),
    "7": (((0, 6), (4, 6), (1.5, 0)),),
    "8": (((1, 3.2), (0.3, 4), (0.3, 5.2), (1, 6), (3, 6), (3.7, 5.2), (3.7, 4),
           (3, 3.2), (1, 3.2), (0.3, 2.4), (0.3, 0.8), (1, 0), (3, 0), (3.7, 0.8),
           (3.7, 2.4), (3, 3.2)),),
    "9": (((0.5, 0), (3, 0), (4, 1), (4, 5), (3, 6), (1, 6), (0, 5), (0, 3.5),
           (1, 2.5), (4, 2.5)),),
    "A": (((0, 0), (2, 6), (4, 0)), ((0.7, 2), (3.3, 2))),
    "B": (((0, 0), (0, 6), (3, 6), (4, 5), (4, 3.9), (3, 3.2), (0, 3.2)),
          ((3, 3.2), (4, 2.4), (4, 1), (3, 0), (0, 0))),
    "C": (((4, 1), (3, 0), (1, 0), (0, 1), (0, 5), (1, 6), (3, 6), (4, 5)),),
    "D": (((0, 0), (0, 6), (2.8, 6), (4, 4.8), (4, 1.2), (2.8, 0), (0, 0)),),
    "E": (((4, 0), (0, 0), (0, 6), (4, 6)), ((0, 3.2), (3, 3.2))),
    "F": (((0, 0), (0, 6), (4, 6)), ((0, 3.2), (3, 3.2))),
    "G": (((4, 5), (3, 6), (1, 6), (0, 5), (0, 1), (1, 0), (3, 0), (4, 1),
           (4, 2.8), (2.2, 2.8)),),
    "H": (((0, 0), (0, 6)), ((4, 0), (4, 6)), ((0, 3.2), (4, 3.2))),
    "I": (((1, 0), (3, 0)), ((2, 0), (2, 6)), ((1, 6), (3, 6))),
    "J": (((3.5, 6), (3.5, 1), (2.5, 0), (1, 0), (0, 1)),),
    "K": (((0, 0), (0, 6)), ((4, 6), (0, 2.6)), ((1.5, 3.7), (4, 0))),
    "L": (((0, 6), (0, 0), (4, 0)),),
    "M": (((0, 0), (0, 6), (2, 2.8), (4, 6), (4, 0)),),
    "N": (((0, 0), (0, 6), (4, 0), (4, 6)),),
    "O": (((1, 0), (3, 0), (4, 1), (4, 5), (3, 6), (1, 6), (0, 5), (0, 1), (1, 0)),),
    "P": (((0, 0), (0, 6), (3, 6), (4, 5), (4, 3.8), (3, 2.8), (0, 2.8)),),
    "Q": (((1, 0), (3, 0), (4, 1), (4, 5), (3, 6), (1, 6), (0, 5), (0, 1), (1, 0)),
          ((2.5, 1.5), (4, 0))),
    "R": (((0, 0), (0, 6), (3, 6), (4, 5), (4, 3.8), (3, 2.8), (0, 2.8)),
          ((1.8, 2.8), (4, 0))),
    "S": (((4, 5), (3, 6), (1, 6), (0, 5), (0, 4), (1, 3.2), (3, 2.8), (4, 2),
           (4, 1), (3, 0), (1, 0), (0, 1)),),
    "T": (((0, 6), (4, 6)), ((2, 6), (2, 0))),
    "U": (((0, 6), (0, 1), (1, 0), (3, 0), (4, 1), (4, 6)),),
    "V": (((0, 6), (2, 0), (4, 6)),),
    "W": (((0, 6), (1, 0), (2, 3.6), (3, 0), (4, 6)),),
    "X": (((0, 0), (4, 6)), ((0, 6), (4, 0))),
    "Y": (((0, 6), (2, 3), (4, 6)), ((2, 3), (2, 0))),
    "Z": (((0, 6), (4, 6), (0, 0), (4, 0)),),
    "?": (((0, 5), (1, 6), (3, 6), (4, 5), (4, 4), (2, 2.6), (2, 1.8)),
          ((2, 0.3), (2, 0))),
    "=": (((0, 3.8), (4, 3.8)), ((0, 2.2), (4, 2.2))),
    "-": (((0.5, 3), (3.5, 3)),),
    "+": (((2, 1), (2, 5)), ((0, 3), (4, 3))),
    ":": (((2, 4.4), (2, 4.1)), ((2, 1.5), (2, 1.2))),
    ".": (((2, 0.3), (2, 0)),),
    " ": (),
}

GLYPH_W = 4.0
GLYPH_H = 6.0
ADVANCE = 5.6  # design units between glyph origins
_DESIGN_SCALE = 7.0  # font "size" equals this many design units of height
STROKE_FRAC = 0.13  # stroke width as a fraction of font size


def text_width(text: str, size: float) -> float:
    if not text:
        return 0.0
    scale = size / _DESIGN_SCALE
    return ((len(text) - 1) * ADVANCE + GLYPH_W) * scale


def text_strokes(t: Text) -> list[Polyline]:
    """Expand a Text primitive into centered polyline strokes."""
    scale = t.size / _DESIGN_SCALE
    width = text_width(t.text, t.size)
    x0 = t.x - width / 2.0
    # design y is up with the vertical center at 3; scene y grows down
    y_mid = 3.0
    out: list[Polyline] = []
    stroke_w = t.size * STROKE_FRAC
    for i, ch in enumerate(t.text.upper()):
        strokes = GLYPHS.get(ch)
        if strokes is None:
            raise ValueError(f"glyph {ch!r} is not in the embedded font")
        gx = x0 + i * ADVANCE * scale
        for stroke in strokes:
            pts = tuple((gx + px * scale, t.y + (y_mid - py) * scale) for px, py in stroke)
            out.append(Polyline(points=pts, color=t.color, width=stroke_w))
    return out
