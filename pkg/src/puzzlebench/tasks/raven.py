"""Task 2: 3x3 pattern-completion matrices.

Every tile is fully determined by per-attribute transformation rules over
five attributes (shape, color, size, rotation, count).  A constant rule
pins one value for all nine tiles; an additive rule indexes a 3-value
sequence by column; a compositional rule indexes it by (row+col) mod 3.
The bottom-right tile is hidden and the candidate answer is compared to
the ground-truth tile render by SSIM at threshold 0.997.
"""

from __future__ import annotations

import math

import numpy as np

from puzzlebench.core import (
    DifficultyRange,
    RetryGeneration,
    TaskDescriptor,
    VerificationResult,
)
from puzzlebench.render import RasterImage, rasterize
from puzzlebench.scene import (
    INK,
    SYMBOL_COLORS,
    Circle,
    Polygon,
    Rect,
    Scene,
    Text,
    rgb,
)
from puzzlebench.tasks.common import ssim_verify
from puzzlebench.vision import ssim

TASK = TaskDescriptor(
    task_id=2, name="raven", domain="pattern", binary=False,
    axes=(
        DifficultyRange("rules", 0, 3, {"easy": 1, "medium": 2, "hard": 3}),
        DifficultyRange("compositional", 0, 1, {"easy": 0, "medium": 0, "hard": 1}),
    ))

VIOLATIONS = {"wrong_shape", "wrong_color", "wrong_rotation", "wrong_count",
              "wrong_size"}

EXPECTED_CHECKS = {v: {"ssim"} for v in VIOLATIONS}

SSIM_THRESHOLD = 0.997

ATTRS = ("shape", "color", "size", "rotation", "count")
SHAPES = ("triangle", "square", "pentagon", "hexagon", "circle", "star")
ROTATION_SENSITIVE = {"triangle", "pentagon", "hexagon", "star"}
DOMAIN_SIZES = {"shape": 6, "color": 10, "size": 3, "rotation": 4, "count": 4}

_TILE = 10.0
_MARGIN = 1.0
_SIZE_FACTORS = (0.55, 0.75, 0.95)  # small / medium / large
_COUNT_LAYOUT = {
    1: (((0.5, 0.5),), 1.0),
    2: (((0.32, 0.32), (0.68, 0.68)), 0.52),
    3: (((0.5, 0.3), (0.3, 0.7), (0.7, 0.7)), 0.45),
    4: (((0.3, 0.3), (0.7, 0.3), (0.3, 0.7), (0.7, 0.7)), 0.45),
}

# minimum luminance gap for a color perturbation to stay SSIM-detectable
_MIN_LUMA_GAP = 40.0


def _luma(color_name: str) -> float:
    r, g, b = rgb(color_name)
    return 0.299 * r + 0.587 * g + 0.114 * b


def _rule_index(kind: str, row: int, col: int) -> int:
    if kind == "constant":
        return 0
    if kind == "additive":
        return col
    if kind == "compositional":
        return (row + col) % 3
    raise ValueError(kind)


def _tile_attrs(rules: list[dict], row: int, col: int) -> dict:
    out = {}
    for rule in rules:
        out[rule["attr"]] = rule["values"][_rule_index(rule["kind"], row, col)]
    return out


def generate(params: dict, rng: np.random.Generator) -> dict:
    num_rules = int(params["rules"])
    want_comp = bool(params["compositional"])
    if not (0 <= num_rules <= 3):
        raise ValueError(f"rules out of range: {num_rules}")

    rule_attrs = [ATTRS[i] for i in sorted(rng.choice(5, size=num_rules,
                                                      replace=False))]
    kinds = []
    if num_rules:
        kinds = ["compositional"] if want_comp else ["additive"]
        for _ in range(num_rules - 1):
            kinds.append(str(rng.choice(["additive", "compositional"]))
                         if want_comp else "additive")
        kinds = [kinds[i] for i in rng.permutation(num_rules)]

    rules = []
    kind_by_attr = dict(zip(rule_attrs, kinds))
    for attr in ATTRS:
        size = DOMAIN_SIZES[attr]
        if attr in kind_by_attr:
            values = [int(v) for v in rng.choice(size, size=3, replace=False)]
            rules.append({"attr": attr, "kind": kind_by_attr[attr],
                          "values": values})
        else:
            rules.append({"attr": attr, "kind": "constant",
                          "values": [int(rng.integers(size))]})

    answer = _tile_attrs(rules, 2, 2)
    truth_scene = _tile_scene(answer)
    truth_img = rasterize(truth_scene, 512)

    distractors = []
    substituted = False
    for violation in ("wrong_shape", "wrong_color", "wrong_rotation", "wrong_count"):
        attr = violation.removeprefix("wrong_")
        if attr == "rotation" and SHAPES[answer["shape"]] not in ROTATION_SENSITIVE:
            attr, violation, substituted = "size", "wrong_size", True
        scene = _perturbed_tile(answer, attr, truth_img, rng)
        distractors.append((scene, violation))

    return {
        "puzzle": _matrix_scene(rules),
        "solution": truth_scene,
        "distractors": distractors,
        "structure": {
            "tile": _TILE,
            "rules": rules,
            "rotation_substituted": substituted,
        },
    }


def _perturbed_tile(answer: dict, attr: str, truth_img: RasterImage,
                    rng: np.random.Generator) -> Scene:
    """Re-render the answer tile with one attribute changed.

    Candidate replacement values are tried in random order until the
    rendered tile clears the SSIM separation gate.
    """
    options = [v for v in range(DOMAIN_SIZES[attr]) if v != answer[attr]]
    if attr == "color":
        base = _luma(SYMBOL_COLORS[answer["color"]])
        strong = [v for v in options
                  if abs(_luma(SYMBOL_COLORS[v]) - base) >= _MIN_LUMA_GAP]
        options = strong or options
    if attr == "rotation" and SHAPES[answer["shape"]] == "hexagon":
        # a hexagon has 60-degree symmetry: 90 vs 270 render identically,
        # but any change from the current value is still visible
        pass
    order = rng.permutation(len(options))
    for k in order:
        attrs = dict(answer)
        attrs[attr] = options[int(k)]
        scene = _tile_scene(attrs)
        if ssim(truth_img, rasterize(scene, 512)) < SSIM_THRESHOLD:
            return scene
    raise RetryGeneration(f"no {attr} perturbation clears the SSIM gate")


def _matrix_scene(rules: list[dict]) -> Scene:
    side = 2 * _MARGIN + 3 * _TILE
    sc = Scene(side, side)
    for r in range(3):
        for c in range(3):
            ox = _MARGIN + c * _TILE
            oy = _MARGIN + r * _TILE
            sc.add(Rect(ox, oy, _TILE, _TILE, stroke=INK, stroke_width=0.12))
            if r == 2 and c == 2:
                sc.add(Text(ox + _TILE / 2, oy + _TILE / 2, "?",
                            size=_TILE * 0.6, color="red"))
            else:
                _draw_tile(sc, ox, oy, _tile_attrs(rules, r, c))
    return sc


def _tile_scene(attrs: dict) -> Scene:
    side = 2 * _MARGIN + _TILE
    sc = Scene(side, side)
    sc.add(Rect(_MARGIN, _MARGIN, _TILE, _TILE, stroke=INK, stroke_width=0.12))
    _draw_tile(sc, _MARGIN, _MARGIN, attrs)
    return sc


def _draw_tile(sc: Scene, ox: float, oy: float, attrs: dict) -> None:
    shape = SHAPES[attrs["shape"]]
    color = SYMBOL_COLORS[attrs["color"]]
    rotation = attrs["rotation"] * 90.0
    count = attrs["count"] + 1
    positions, scale = _COUNT_LAYOUT[count]
    radius = _TILE * 0.36 * _SIZE_FACTORS[attrs["size"]] * scale
    for (fx, fy) in positions:
        cx = ox + fx * _TILE
        cy = oy + fy * _TILE
        if shape == "circle":
            sc.add(Circle(cx, cy, radius, fill=color, stroke=INK,
                          stroke_width=_TILE * 0.02))
        else:
            pts = _shape_points(shape, cx, cy, radius, rotation)
            sc.add(Polygon(pts, fill=color, stroke=INK,
                           stroke_width=_TILE * 0.02))


def _shape_points(shape: str, cx: float, cy: float, radius: float,
                  rotation: float):
    if shape == "star":
        pts = []
        for i in range(10):
            r = radius if i % 2 == 0 else radius * 0.45
            ang = math.radians(rotation - 90.0 + i * 36.0)
            pts.append((cx + r * math.cos(ang), cy + r * math.sin(ang)))
        return tuple(pts)
    sides = {"triangle": 3, "square": 4, "pentagon": 5, "hexagon": 6}[shape]
    start = -90.0 + (45.0 if shape == "square" else 0.0)
    return tuple(
        (cx + radius * math.cos(math.radians(rotation + start + i * 360.0 / sides)),
         cy + radius * math.sin(math.radians(rotation + start + i * 360.0 / sides)))
        for i in range(sides))


def verify(instance, candidate: RasterImage) -> VerificationResult:
    truth = rasterize(instance.solution, candidate.width)
    return ssim_verify(truth, candidate, SSIM_THRESHOLD)
