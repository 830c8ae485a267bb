"""Deterministic computer-vision toolbox shared by all verifiers.

Color classification is nearest-palette-color with a fixed tolerance
(ties break to the lowest class id), grid extraction samples cell
centers / center patches / inverse-distance-weighted votes, and SSIM is
the standard windowed luminance formulation (11x11 Gaussian window,
sigma 1.5, K1=0.01, K2=0.03, dynamic range 255, mean over all window
positions).  All functions are pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from puzzlebench import _kernels
from puzzlebench.render import RasterImage, scene_transform
from puzzlebench.scene import BADGE_NO, BADGE_YES, PATH_COLOR, STYLE, rgb

TOLERANCE = int(STYLE["color_tolerance"])
_TOL2 = TOLERANCE * TOLERANCE
_PATH_PATCH = float(STYLE["path_patch_fraction"])
_PATH_COVERAGE = float(STYLE["path_coverage_threshold"])
_VOTE_PATCH = float(STYLE["vote_patch_fraction"])

_SSIM = STYLE["ssim"]


@dataclass(frozen=True)
class GridGeometry:
    """Pixel-space placement of a rows x cols cell grid."""

    origin_x: float
    origin_y: float
    cell_w: float
    cell_h: float
    rows: int
    cols: int

    def center(self, row: int, col: int) -> tuple[float, float]:
        return (self.origin_x + (col + 0.5) * self.cell_w,
                self.origin_y + (row + 0.5) * self.cell_h)


def grid_geometry(scene_w: float, scene_h: float, resolution: int,
                  origin_units: tuple[float, float], cell_units: float,
                  rows: int, cols: int) -> GridGeometry:
    """Map a grid described in scene units onto a rendered canvas."""
    scale, ox, oy = scene_transform(scene_w, scene_h, resolution)
    return GridGeometry(origin_x=origin_units[0] * scale + ox,
                        origin_y=origin_units[1] * scale + oy,
                        cell_w=cell_units * scale, cell_h=cell_units * scale,
                        rows=rows, cols=cols)


def class_array(color_names: Sequence[str]) -> np.ndarray:
    return np.array([rgb(c) for c in color_names], dtype=np.int32)


def classify_color(color: Sequence[int], classes: np.ndarray,
                   tolerance: int = TOLERANCE) -> int:
    """Index of the nearest class within tolerance, else -1."""
    if len(classes) == 0:
        raise ValueError("classes must be nonempty")
    px = np.asarray(color, dtype=np.int32)
    d = ((classes - px[None, :]) ** 2).sum(axis=1)
    k = int(np.argmin(d))  # argmin takes the first (lowest id) on ties
    return k if d[k] <= tolerance * tolerance else -1


def _patch(img: np.ndarray, cx: float, cy: float, half_w: float, half_h: float):
    h, w, _ = img.shape
    i0 = max(0, int(round(cy - half_h)))
    i1 = min(h, max(i0 + 1, int(round(cy + half_h))))
    j0 = max(0, int(round(cx - half_w)))
    j1 = min(w, max(j0 + 1, int(round(cx + half_w))))
    return img[i0:i1, j0:j1], j0, i0


def sample_grid(image: RasterImage, geom: GridGeometry, class_names: Sequence[str],
                mode: str = "center") -> np.ndarray:
    """Classify every grid cell; -1 marks an unreadable cell.

    Modes: ``center`` samples the single pixel at the cell center,
    ``patch`` takes the majority class over the central 50% patch, and
    ``vote`` weights every classified non-background pixel of the central
    patch by 1/(1+d) to the cell center and returns the max-weight class.
    """
    img = image.rgb
    classes = class_array(class_names)
    out = np.full((geom.rows, geom.cols), -1, dtype=np.int16)
    if mode == "center":
        for r in range(geom.rows):
            for c in range(geom.cols):
                cx, cy = geom.center(r, c)
                i, j = int(cy), int(cx)
                if 0 <= i < img.shape[0] and 0 <= j < img.shape[1]:
                    out[r, c] = classify_color(img[i, j], classes)
        return out
    if mode == "patch":
        half = 0.5 / 2.0
        for r in range(geom.rows):
            for c in range(geom.cols):
                cx, cy = geom.center(r, c)
                patch, _, _ = _patch(img, cx, cy, geom.cell_w * half, geom.cell_h * half)
                ids = _kernels.classify_image(np.ascontiguousarray(patch), classes, _TOL2)
                known = ids[ids >= 0]
                if known.size:
                    out[r, c] = np.bincount(known).argmax()
        return out
    if mode == "vote":
        bg = class_array(["white"])
        half = _VOTE_PATCH / 2.0
        for r in range(geom.rows):
            for c in range(geom.cols):
                cx, cy = geom.center(r, c)
                patch, j0, i0 = _patch(img, cx, cy, geom.cell_w * half, geom.cell_h * half)
                ids = _kernels.classify_image(np.ascontiguousarray(patch), classes, _TOL2)
                is_bg = _kernels.classify_image(np.ascontiguousarray(patch), bg, _TOL2) == 0
                ii, jj = np.nonzero((ids >= 0) & ~is_bg)
                if ii.size == 0:
                    continue
                d = np.hypot(jj + j0 + 0.5 - cx, ii + i0 + 0.5 - cy)
                weights = 1.0 / (1.0 + d)
                totals = np.zeros(len(classes))
                np.add.at(totals, ids[ii, jj], weights)
                out[r, c] = int(np.argmax(totals))  # first max = lowest id
        return out
    raise ValueError(f"unknown sampling mode {mode!r}")


def _luminance(image: RasterImage) -> np.ndarray:
    p = image.rgb.astype(np.float64)
    return 0.299 * p[:, :, 0] + 0.587 * p[:, :, 1] + 0.114 * p[:, :, 2]


def _gaussian_kernel(window: int, sigma: float) -> np.ndarray:
    x = np.arange(window, dtype=np.float64) - (window - 1) / 2.0
    k = np.exp(-0.5 * (x / sigma) ** 2)
    return k / k.sum()


def ssim(a: RasterImage, b: RasterImage) -> float:
    """Structural similarity on luminance over all full 11x11 windows."""
    if a.pixels.shape != b.pixels.shape:
        raise ValueError(
            f"dimension mismatch: {a.pixels.shape[:2]} vs {b.pixels.shape[:2]}")
    x = _luminance(a)
    y = _luminance(b)
    win = int(_SSIM["window"])
    if min(x.shape) < win:
        raise ValueError(f"images must be at least {win}px per side")
    kern = _gaussian_kernel(win, float(_SSIM["sigma"]))
    conv = _kernels.conv_valid_sep
    ux = conv(x, kern)
    uy = conv(y, kern)
    uxx = conv(x * x, kern)
    uyy = conv(y * y, kern)
    uxy = conv(x * y, kern)
    vx = uxx - ux * ux
    vy = uyy - uy * uy
    vxy = uxy - ux * uy
    dr = float(_SSIM["dynamic_range"])
    c1 = (float(_SSIM["k1"]) * dr) ** 2
    c2 = (float(_SSIM["k2"]) * dr) ** 2
    s = ((2.0 * ux * uy + c1) * (2.0 * vxy + c2)) / \
        ((ux * ux + uy * uy + c1) * (vx + vy + c2))
    return float(s.mean())


def count_answer_pixels(image: RasterImage) -> tuple[int, int]:
    """(green, red) pixel counts for binary answer badges."""
    classes = class_array([BADGE_YES, BADGE_NO])
    ids = _kernels.classify_image(np.ascontiguousarray(image.rgb), classes, _TOL2)
    return int((ids == 0).sum()), int((ids == 1).sum())


def extract_path_cells(image: RasterImage,
                       geoms: Sequence[GridGeometry]) -> set[tuple[int, int, int]]:
    """Cells whose central 50% patch is >= 15% path-blue, per layer."""
    img = image.rgb
    classes = class_array([PATH_COLOR])
    cells: set[tuple[int, int, int]] = set()
    half = _PATH_PATCH / 2.0
    for layer, geom in enumerate(geoms):
        for r in range(geom.rows):
            for c in range(geom.cols):
                cx, cy = geom.center(r, c)
                patch, _, _ = _patch(img, cx, cy, geom.cell_w * half, geom.cell_h * half)
                if patch.size == 0:
                    continue
                ids = _kernels.classify_image(np.ascontiguousarray(patch), classes, _TOL2)
                if (ids == 0).mean() >= _PATH_COVERAGE:
                    cells.add((layer, r, c))
    return cells
