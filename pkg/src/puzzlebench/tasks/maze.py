"""Task 1: multi-layer maze navigation.

Each layer is a perfect maze carved by randomized depth-first search, so
within a layer any two cells are joined by exactly one open route; layers
are chained by portals at matching grid positions.  The solution is the
BFS shortest path.  Verification extracts blue path cells from the
candidate image and runs four checks in order: start present, end
present, cells passable, and route connectivity through open edges and
portals.  Each distractor breaks exactly one of those checks.
"""

from __future__ import annotations

from collections import deque

import numpy as np

from puzzlebench.core import (
    DifficultyRange,
    RetryGeneration,
    TaskDescriptor,
    VerificationResult,
)
from puzzlebench.render import RasterImage
from puzzlebench.scene import (
    END_COLOR,
    INK,
    PATH_COLOR,
    PORTAL_COLORS,
    START_COLOR,
    Circle,
    Line,
    Polyline,
    Scene,
    Text,
)
from puzzlebench.vision import extract_path_cells, grid_geometry

TASK = TaskDescriptor(
    task_id=1, name="maze", domain="spatial", binary=False,
    axes=(
        DifficultyRange("grid", 4, 128, {"easy": 8, "medium": 16, "hard": 32}),
        DifficultyRange("layers", 1, 8, {"easy": 1, "medium": 2, "hard": 3}),
        DifficultyRange("portals", 0, 20, {"easy": 0, "medium": 2, "hard": 5}),
    ))

VIOLATIONS = {"wall_breach", "portal_skip", "disconnected", "wrong_exit"}

# diagnostic check each violation is designed to trip
EXPECTED_CHECKS = {
    "wall_breach": {4},
    "portal_skip": {4},
    "disconnected": {4},
    "wrong_exit": {2},
}

_MARGIN = 1.5
_LABEL_BAND = 2.2
_GAP = 1.0
_WALL_W = 0.12
_PATH_W = 0.5
_DISC_R = 0.3

Cell = tuple[int, int, int]  # (layer, row, col)


def _carve_layer(n: int, rng: np.random.Generator):
    """Perfect maze over an n x n layer via randomized DFS."""
    wall_right = np.ones((n, n - 1), dtype=bool)
    wall_down = np.ones((n - 1, n), dtype=bool)
    visited = np.zeros((n, n), dtype=bool)
    start = (int(rng.integers(n)), int(rng.integers(n)))
    visited[start] = True
    stack = [start]
    dirs = ((-1, 0), (1, 0), (0, -1), (0, 1))
    while stack:
        r, c = stack[-1]
        options = []
        for dr, dc in dirs:
            rr, cc = r + dr, c + dc
            if 0 <= rr < n and 0 <= cc < n and not visited[rr, cc]:
                options.append((rr, cc))
        if not options:
            stack.pop()
            continue
        rr, cc = options[int(rng.integers(len(options)))]
        if rr == r:
            wall_right[r, min(c, cc)] = False
        else:
            wall_down[min(r, rr), c] = False
        visited[rr, cc] = True
        stack.append((rr, cc))
    return wall_right, wall_down


class _Maze:
    """In-memory structural spec: walls, portals, endpoints, layout."""

    def __init__(self, n, layers, wall_right, wall_down, portals, start, end):
        self.n = n
        self.layers = layers
        self.wall_right = wall_right  # list of (n, n-1) bool arrays
        self.wall_down = wall_down    # list of (n-1, n) bool arrays
        self.portals = portals        # list of (layer, row, col, color_idx)
        self.start = start
        self.end = end
        self.portal_map: dict[Cell, Cell] = {}
        for (l, r, c, _k) in portals:
            self.portal_map[(l, r, c)] = (l + 1, r, c)
            self.portal_map[(l + 1, r, c)] = (l, r, c)

    def open_between(self, a: Cell, b: Cell) -> bool:
        la, ra, ca = a
        lb, rb, cb = b
        if la == lb:
            if ra == rb and abs(ca - cb) == 1:
                return not self.wall_right[la][ra, min(ca, cb)]
            if ca == cb and abs(ra - rb) == 1:
                return not self.wall_down[la][min(ra, rb), ca]
            return False
        return self.portal_map.get(a) == b

    def neighbors(self, cell: Cell):
        l, r, c = cell
        n = self.n
        for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1)):
            rr, cc = r + dr, c + dc
            if 0 <= rr < n and 0 <= cc < n and self.open_between(cell, (l, rr, cc)):
                yield (l, rr, cc)
        link = self.portal_map.get(cell)
        if link is not None:
            yield link

    def scene_size(self) -> tuple[float, float]:
        w = 2 * _MARGIN + self.layers * self.n + (self.layers - 1) * _GAP
        h = 2 * _MARGIN + _LABEL_BAND + self.n
        return w, h

    def layer_origin(self, layer: int) -> tuple[float, float]:
        return (_MARGIN + layer * (self.n + _GAP), _MARGIN + _LABEL_BAND)

    def to_dict(self) -> dict:
        return {
            "grid": self.n,
            "layers": self.layers,
            "wall_right": [["".join("1" if x else "0" for x in row) for row in wr]
                           for wr in self.wall_right],
            "wall_down": [["".join("1" if x else "0" for x in row) for row in wd]
                          for wd in self.wall_down],
            "portals": [list(p) for p in self.portals],
            "start": list(self.start),
            "end": list(self.end),
        }

    @staticmethod
    def from_dict(d: dict) -> "_Maze":
        wr = [np.array([[ch == "1" for ch in row] for row in layer], dtype=bool)
              for layer in d["wall_right"]]
        wd = [np.array([[ch == "1" for ch in row] for row in layer], dtype=bool)
              for layer in d["wall_down"]]
        return _Maze(d["grid"], d["layers"], wr, wd,
                     [tuple(p) for p in d["portals"]],
                     tuple(d["start"]), tuple(d["end"]))


def _bfs_path(maze: _Maze, start: Cell, goal: Cell,
              blocked: frozenset = frozenset()) -> list[Cell] | None:
    if start == goal:
        return [start]
    parent: dict[Cell, Cell] = {start: start}
    q = deque([start])
    while q:
        cur = q.popleft()
        for nxt in maze.neighbors(cur):
            if nxt in parent or nxt in blocked:
                continue
            parent[nxt] = cur
            if nxt == goal:
                path = [nxt]
                while path[-1] != start:
                    path.append(parent[path[-1]])
                return path[::-1]
            q.append(nxt)
    return None


def check_cells(maze: _Maze, cells: set[Cell]):
    """The four structural checks over an extracted cell set.

    Returns (check_id, detail) of the first failed check, or (0, {}) when
    the set encodes a valid start-to-end route.
    """
    if maze.start not in cells:
        return 1, {"cell": list(maze.start)}
    if maze.end not in cells:
        return 2, {"cell": list(maze.end)}
    for (l, r, c) in cells:
        if not (0 <= l < maze.layers and 0 <= r < maze.n and 0 <= c < maze.n):
            return 3, {"cell": [l, r, c]}
    # route connectivity restricted to the extracted cells
    reached = {maze.start}
    q = deque([maze.start])
    while q:
        cur = q.popleft()
        for nxt in maze.neighbors(cur):
            if nxt in cells and nxt not in reached:
                reached.add(nxt)
                q.append(nxt)
    if maze.end in reached:
        return 0, {}
    detail = {"gap": "disconnected"}
    for (l, r, c) in sorted(reached):
        for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1)):
            nb = (l, r + dr, c + dc)
            if nb in cells and nb not in reached:
                detail = {"gap": "wall", "cells": [[l, r, c], list(nb)]}
                break
        for dl in (-1, 1):
            nb = (l + dl, r, c)
            if nb in cells and nb not in reached:
                detail = {"gap": "layer_jump", "cells": [[l, r, c], list(nb)]}
                break
        if detail["gap"] != "disconnected":
            break
    return 4, detail


def _route_ok(maze: _Maze, cells: set[Cell]) -> bool:
    return check_cells(maze, cells)[0] == 0


def _place_portals(n, layers, count, rng):
    portals = []
    used: set[Cell] = set()
    pairs = list(range(layers - 1))
    order = pairs + [int(rng.integers(layers - 1)) for _ in range(count - len(pairs))]
    for idx, lp in enumerate(order[:count]):
        for _ in range(200):
            r, c = int(rng.integers(n)), int(rng.integers(n))
            if (lp, r, c) not in used and (lp + 1, r, c) not in used:
                used.add((lp, r, c))
                used.add((lp + 1, r, c))
                portals.append((lp, r, c, idx % len(PORTAL_COLORS)))
                break
        else:
            raise RetryGeneration("portal placement congestion")
    return portals, used


def generate(params: dict, rng: np.random.Generator) -> dict:
    n = int(params["grid"])
    layers = int(params["layers"])
    n_portals = int(params["portals"])
    if not (4 <= n <= 128 and 1 <= layers <= 8 and 0 <= n_portals <= 20):
        raise ValueError(f"maze params out of range: {params}")
    if layers > 1 and n_portals < layers - 1:
        raise ValueError("portals must be >= layers-1 to connect all layers")

    walls = [_carve_layer(n, rng) for _ in range(layers)]
    wall_right = [w[0] for w in walls]
    wall_down = [w[1] for w in walls]
    portals, portal_cells = (_place_portals(n, layers, n_portals, rng)
                             if layers > 1 else ([], set()))

    maze = None
    path = None
    for _ in range(32):
        start = (0, int(rng.integers(n)), int(rng.integers(n)))
        end = (layers - 1, int(rng.integers(n)), int(rng.integers(n)))
        if start in portal_cells or end in portal_cells or start == end:
            continue
        cand = _Maze(n, layers, wall_right, wall_down, portals, start, end)
        p = _bfs_path(cand, start, end)
        if p is None or len(p) < max(4, n // 2):
            continue
        if _fold_pairs(cand, p):
            maze, path = cand, p
            break
    if maze is None:
        raise RetryGeneration("no suitable start/end placement")

    distractors = _build_distractors(maze, path, rng)

    puzzle = _render(maze, None)
    solution = _render(maze, path)
    scenes = [(_render(maze, seq, gap_split=True), viol) for seq, viol in distractors]

    return {
        "puzzle": puzzle,
        "solution": solution,
        "distractors": scenes,
        "structure": maze.to_dict(),
    }


def _fold_pairs(maze: _Maze, path: list[Cell]) -> list[tuple[int, int]]:
    """Indices (i, j>=i+2) of same-layer grid-adjacent path cells.

    On a shortest path the connecting edge is necessarily walled (an open
    edge would have been a shortcut), so each pair is a wall-breach site.
    """
    pairs = []
    pos = {cell: i for i, cell in enumerate(path)}
    for i, (l, r, c) in enumerate(path):
        for dr, dc in ((0, 1), (1, 0)):
            j = pos.get((l, r + dr, c + dc))
            if j is not None and abs(j - i) >= 2:
                pairs.append((min(i, j), max(i, j)))
    return sorted(set(pairs))


def _build_distractors(maze: _Maze, path: list[Cell],
                       rng: np.random.Generator) -> list[tuple[list[Cell], str]]:
    out: list[tuple[list[Cell], str]] = []
    out.append((_wall_breach(maze, path, rng), "wall_breach"))
    if maze.layers > 1:
        skip = _portal_skip(maze, path, rng)
        if skip is not None:
            out.append((skip, "portal_skip"))
        else:
            out.append((_wall_breach(maze, path, rng, avoid=out[0][0]), "wall_breach"))
    else:
        out.append((_wall_breach(maze, path, rng, avoid=out[0][0]), "wall_breach"))
    out.append((_disconnected(maze, path, rng), "disconnected"))
    out.append((_wrong_exit(maze, path, rng), "wrong_exit"))
    for seq, _ in out:
        if _route_ok(maze, set(seq)):
            raise RetryGeneration("distractor failed to break verification")
    return out


def _wall_breach(maze, path, rng, avoid=None):
    pairs = _fold_pairs(maze, path)
    order = rng.permutation(len(pairs))
    for k in order:
        i, j = pairs[int(k)]
        seq = path[:i + 1] + path[j:]
        if avoid is not None and seq == avoid:
            continue
        if not _route_ok(maze, set(seq)):
            return seq
    raise RetryGeneration("no usable wall-breach site")


def _portal_skip(maze, path, rng):
    candidates = [i for i, (l, r, c) in enumerate(path)
                  if l < maze.layers - 1 and (l, r, c) not in maze.portal_map
                  and (l + 1, r, c) not in maze.portal_map and 0 < i]
    order = rng.permutation(len(candidates))
    for k in order:
        i = candidates[int(k)]
        l, r, c = path[i]
        jump = (l + 1, r, c)
        tail = _bfs_path(maze, jump, maze.end)
        if tail is None:
            continue
        seq = path[:i + 1] + tail
        if not _route_ok(maze, set(seq)):
            return seq
    return None


def _disconnected(maze, path, rng):
    idxs = rng.permutation(len(path) - 2) + 1
    for k in idxs:
        i = int(k)
        seq = path[:i] + path[i + 1:]
        if not _route_ok(maze, set(seq)):
            return seq
    raise RetryGeneration("no disconnecting cell")


def _wrong_exit(maze, path, rng):
    last = maze.layers - 1
    targets = []
    # endpoints reachable without passing through the true end
    blocked = frozenset([maze.end])
    for r in range(maze.n):
        for c in range(maze.n):
            t = (last, r, c)
            if t != maze.end and t != maze.start:
                targets.append(t)
    order = rng.permutation(len(targets))
    for k in order[:64]:
        t = targets[int(k)]
        alt = _bfs_path(maze, maze.start, t, blocked=blocked)
        if alt is None or len(alt) < 3:
            continue
        if not _route_ok(maze, set(alt)):
            return alt
    raise RetryGeneration("no wrong exit target")


def _render(maze: _Maze, path: list[Cell] | None, gap_split: bool = False) -> Scene:
    w, h = maze.scene_size()
    sc = Scene(w, h)
    n = maze.n
    label_size = min(1.6, 0.16 * n)
    for l in range(maze.layers):
        ox, oy = maze.layer_origin(l)
        sc.add(Text(ox + n / 2.0, _MARGIN + _LABEL_BAND / 2.0,
                    f"LAYER {l + 1}", size=label_size))
        border = ((ox, oy), (ox + n, oy), (ox + n, oy + n), (ox, oy + n))
        for k in range(4):
            a, b = border[k], border[(k + 1) % 4]
            sc.add(Line(a[0], a[1], b[0], b[1], color=INK, width=_WALL_W))
        wr = maze.wall_right[l]
        wd = maze.wall_down[l]
        for r in range(n):
            for c in range(n - 1):
                if wr[r, c]:
                    sc.add(Line(ox + c + 1, oy + r, ox + c + 1, oy + r + 1,
                                color=INK, width=_WALL_W))
        for r in range(n - 1):
            for c in range(n):
                if wd[r, c]:
                    sc.add(Line(ox + c, oy + r + 1, ox + c + 1, oy + r + 1,
                                color=INK, width=_WALL_W))
    for (l, r, c, color_idx) in maze.portals:
        for ll in (l, l + 1):
            ox, oy = maze.layer_origin(ll)
            sc.add(Circle(ox + c + 0.5, oy + r + 0.5, _DISC_R,
                          fill=PORTAL_COLORS[color_idx]))
    sx, sy = _cell_center(maze, maze.start)
    ex, ey = _cell_center(maze, maze.end)
    sc.add(Circle(sx, sy, _DISC_R, fill=START_COLOR))
    sc.add(Circle(ex, ey, _DISC_R, fill=END_COLOR))

    if path is not None:
        for run in _layer_runs(maze, path, gap_split):
            pts = tuple(_cell_center(maze, cell) for cell in run)
            sc.add(Polyline(pts, color=PATH_COLOR, width=_PATH_W))
    return sc


def _cell_center(maze: _Maze, cell: Cell) -> tuple[float, float]:
    l, r, c = cell
    ox, oy = maze.layer_origin(l)
    return (ox + c + 0.5, oy + r + 0.5)


def _layer_runs(maze: _Maze, path: list[Cell], gap_split: bool):
    """Split a cell sequence into drawable same-layer contiguous runs."""
    runs: list[list[Cell]] = [[path[0]]]
    for prev, cur in zip(path, path[1:]):
        same_layer = prev[0] == cur[0]
        adjacent = same_layer and abs(prev[1] - cur[1]) + abs(prev[2] - cur[2]) == 1
        if adjacent or (same_layer and not gap_split):
            runs[-1].append(cur)
        elif same_layer and gap_split:
            runs.append([cur])  # disconnected gap stays visible
        else:
            runs.append([cur])  # layer transition
    return runs


def _geoms(structure: dict, resolution: int):
    maze = _Maze.from_dict(structure)
    w, h = maze.scene_size()
    return maze, [grid_geometry(w, h, resolution, maze.layer_origin(l), 1.0,
                                maze.n, maze.n)
                  for l in range(maze.layers)]


def verify(instance, candidate: RasterImage) -> VerificationResult:
    maze, geoms = _geoms(instance.structure, candidate.width)
    cells = extract_path_cells(candidate, geoms)
    if not cells:
        return VerificationResult.fail("no path detected", check=1,
                                       check_name="no_path", cells=0)
    check, detail = check_cells(maze, cells)
    if check == 0:
        return VerificationResult.ok(check=0, cells=len(cells))
    names = {1: "start", 2: "end", 3: "passable", 4: "connectivity"}
    return VerificationResult.fail(
        f"failed check {check} ({names[check]})", check=check,
        check_name=names[check], **detail)
