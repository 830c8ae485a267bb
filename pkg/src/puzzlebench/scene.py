"""Resolution-independent vector scenes and the shared color palette.

A Scene is an ordered display list of primitives over an abstract canvas;
later items paint over earlier ones.  All colors are palette names; the
palette RGB values live in ``data/style.json`` and are constructed so
that any set of colors a single verifier must tell apart is at least 120
RGB-Euclidean units separated (classification tolerance is 60).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

Point = tuple[float, float]


def _load_style() -> dict:
    with resources.files("puzzlebench.data").joinpath("style.json").open("rb") as fh:
        return json.load(fh)


_STYLE_DOC = _load_style()

PALETTE: dict[str, tuple[int, int, int]] = {
    name: tuple(rgb) for name, rgb in _STYLE_DOC["palette"].items()
}
STYLE: dict = _STYLE_DOC["style"]

RESOLUTIONS = (512, 1024, 2048)

# Colors any verifier classifies against are drawn from a {0,128,255}
# lattice (pairwise distance >= 127); decoration colors are exempt.
SYMBOL_COLORS = ("red", "sky", "green", "yellow", "magenta",
                 "cyan", "violet", "orange", "navy", "mint")
CA_STATE_COLORS = ("black", "red", "sky", "green", "yellow", "magenta",
                   "cyan", "violet", "orange", "navy", "mint", "gray",
                   "teal", "maroon", "olive", "cream")
PORTAL_COLORS = ("orange", "magenta", "cyan", "violet", "yellow",
                 "teal", "navy", "mint", "olive", "maroon")

BACKGROUND = "white"
INK = "black"
PATH_COLOR = "blue"
START_COLOR = "dark_green"
END_COLOR = "red"
BADGE_YES = "green"
BADGE_NO = "red"


def rgb(name: str) -> tuple[int, int, int]:
    return PALETTE[name]


@dataclass(frozen=True)
class Rect:
    x: float
    y: float
    w: float
    h: float
    fill: str | None = None
    stroke: str | None = None
    stroke_width: float = 0.0


@dataclass(frozen=True)
class Circle:
    cx: float
    cy: float
    r: float
    fill: str | None = None
    stroke: str | None = None
    stroke_width: float = 0.0


@dataclass(frozen=True)
class Line:
    x1: float
    y1: float
    x2: float
    y2: float
    color: str = INK
    width: float = 0.1


@dataclass(frozen=True)
class Polyline:
    points: tuple[Point, ...]
    color: str = INK
    width: float = 0.1


@dataclass(frozen=True)
class Polygon:
    points: tuple[Point, ...]
    fill: str | None = None
    stroke: str | None = None
    stroke_width: float = 0.0


@dataclass(frozen=True)
class Text:
    """Monospace label, anchored at the center of its bounding box."""

    x: float
    y: float
    text: str
    size: float
    color: str = INK


Primitive = Rect | Circle | Line | Polyline | Polygon | Text


@dataclass
class Scene:
    width: float
    height: float
    items: list[Primitive] = field(default_factory=list)

    def add(self, *prims: Primitive) -> "Scene":
        for p in prims:
            for col in _colors_of(p):
                if col is not None and col not in PALETTE:
                    raise ValueError(f"color {col!r} is not in the palette")
        self.items.extend(prims)
        return self


def _colors_of(p: Primitive) -> tuple[str | None, ...]:
    if isinstance(p, (Rect, Circle, Polygon)):
        return (p.fill, p.stroke)
    if isinstance(p, (Line, Polyline)):
        return (p.color,)
    return (p.color,)


def color_distance(a: tuple[int, int, int], b: tuple[int, int, int]) -> float:
    return ((a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2 + (a[2] - b[2]) ** 2) ** 0.5
