"""Shared machinery for the two cellular-automaton tasks.

The automaton family is an outer lookup table: a cell in state s with
Moore-neighborhood sum m (toroidal wrap) transitions to table[s][m mod S].
The table is finite, renderable as an S x S color grid, and recoverable
entry by entry, which is what the inverse task requires.
"""

from __future__ import annotations

import numpy as np

from puzzlebench import _kernels
from puzzlebench.scene import CA_STATE_COLORS, INK, Line, Rect, Scene, Text
from puzzlebench.vision import GridGeometry, grid_geometry

CELL = 1.0
MARGIN = 1.5
LABEL_BAND = 2.5
TICK_BAND = 1.4


def simulate(grid: np.ndarray, table: np.ndarray, steps: int) -> np.ndarray:
    if steps < 0:
        raise ValueError("steps must be >= 0")
    g = grid.astype(np.int16)
    t = table.astype(np.int16)
    for _ in range(steps):
        g = _kernels.ca_step(g, t)
    return g


def coverage(grid: np.ndarray, table: np.ndarray, steps: int) -> set[tuple[int, int]]:
    """All (state, neighbor-sum mod S) pairs exercised along the trajectory."""
    s = table.shape[0]
    g = grid.astype(np.int16)
    t = table.astype(np.int16)
    seen: set[tuple[int, int]] = set()
    for _ in range(steps):
        total = np.zeros_like(g, dtype=np.int64)
        for dr in (-1, 0, 1):
            for dc in (-1, 0, 1):
                if dr or dc:
                    total += np.roll(np.roll(g, dr, axis=0), dc, axis=1)
        sums = total % s
        seen.update(zip(g.ravel().tolist(), sums.ravel().tolist()))
        g = _kernels.ca_step(g, t)
    return seen


def draw_state_grid(sc: Scene, ox: float, oy: float, grid: np.ndarray,
                    cell: float = CELL) -> None:
    n = grid.shape[0]
    for r in range(n):
        for c in range(n):
            sc.add(Rect(ox + c * cell, oy + r * cell, cell, cell,
                        fill=CA_STATE_COLORS[int(grid[r, c])]))
    for k in range(n + 1):
        sc.add(Line(ox, oy + k * cell, ox + n * cell, oy + k * cell,
                    color="grid_line", width=0.045 * cell))
        sc.add(Line(ox + k * cell, oy, ox + k * cell, oy + n * cell,
                    color="grid_line", width=0.045 * cell))
    for a, b in (((ox, oy), (ox + n * cell, oy)),
                 ((ox + n * cell, oy), (ox + n * cell, oy + n * cell)),
                 ((ox + n * cell, oy + n * cell), (ox, oy + n * cell)),
                 ((ox, oy + n * cell), (ox, oy))):
        sc.add(Line(a[0], a[1], b[0], b[1], color=INK, width=0.07 * cell))


def draw_rule_table(sc: Scene, ox: float, oy: float, table: np.ndarray,
                    cell: float = CELL, ticks: bool = True) -> None:
    """Rule table grid: row = current state, column = neighbor sum mod S."""
    draw_state_grid(sc, ox, oy, table, cell)
    if not ticks:
        return
    size = 0.5 * cell
    for s in range(table.shape[0]):
        sc.add(Text(ox - 0.7 * cell, oy + (s + 0.5) * cell, str(s), size=size))
        sc.add(Text(ox + (s + 0.5) * cell, oy - 0.7 * cell, str(s), size=size))


def solution_grid_scene(grid: np.ndarray) -> Scene:
    n = grid.shape[0]
    sc = Scene(2 * MARGIN + n * CELL, 2 * MARGIN + n * CELL)
    draw_state_grid(sc, MARGIN, MARGIN, grid)
    return sc


def solution_table_scene(table: np.ndarray) -> Scene:
    s = table.shape[0]
    side = 2 * MARGIN + TICK_BAND + s * CELL
    sc = Scene(side, side)
    draw_rule_table(sc, MARGIN + TICK_BAND, MARGIN + TICK_BAND, table)
    return sc


def solution_grid_geometry(n: int, resolution: int) -> GridGeometry:
    side = 2 * MARGIN + n * CELL
    return grid_geometry(side, side, resolution, (MARGIN, MARGIN), CELL, n, n)


def solution_table_geometry(s: int, resolution: int) -> GridGeometry:
    side = 2 * MARGIN + TICK_BAND + s * CELL
    return grid_geometry(side, side, resolution,
                         (MARGIN + TICK_BAND, MARGIN + TICK_BAND), CELL, s, s)
