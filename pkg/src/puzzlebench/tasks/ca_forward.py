"""Task 3: cellular automaton forward prediction.

The puzzle shows an initial grid, the transition rule table, and a step
count; the answer is the grid after k synchronous steps.  Verification
samples state colors at cell centers and compares cell by cell.
"""

from __future__ import annotations

import numpy as np

from puzzlebench.core import (
    DifficultyRange,
    RetryGeneration,
    TaskDescriptor,
    VerificationResult,
)
from puzzlebench.render import RasterImage
from puzzlebench.scene import CA_STATE_COLORS, Scene, Text
from puzzlebench.tasks import _ca
from puzzlebench.vision import sample_grid

TASK = TaskDescriptor(
    task_id=3, name="ca_forward", domain="pattern", binary=False,
    axes=(
        DifficultyRange("grid", 4, 64, {"easy": 8, "medium": 16, "hard": 32}),
        DifficultyRange("states", 2, 8, {"easy": 2, "medium": 4, "hard": 8}),
        DifficultyRange("steps", 1, 20, {"easy": 1, "medium": 3, "hard": 5}),
    ))

VIOLATIONS = {"wrong_cell", "wrong_step_count", "wrong_rule"}

EXPECTED_CHECKS = {v: {"cells"} for v in VIOLATIONS}


def generate(params: dict, rng: np.random.Generator) -> dict:
    n = int(params["grid"])
    s = int(params["states"])
    k = int(params["steps"])
    if not (4 <= n <= 64 and 2 <= s <= 8 and 1 <= k <= 20):
        raise ValueError(f"ca_forward params out of range: {params}")

    table = rng.integers(0, s, size=(s, s)).astype(np.int16)
    final = prev = initial = None
    for _ in range(64):
        initial = rng.integers(0, s, size=(n, n)).astype(np.int16)
        prev = _ca.simulate(initial, table, k - 1)
        final = _ca.simulate(prev, table, 1)
        if not np.array_equal(final, initial) and not np.array_equal(final, prev):
            break
    else:
        raise RetryGeneration("trajectory degenerate for every initial state")

    distractors = []
    flip1 = _flip_cell(final, s, rng)
    distractors.append((_ca.solution_grid_scene(flip1[0]), "wrong_cell"))
    distractors.append((_ca.solution_grid_scene(prev), "wrong_step_count"))
    distractors.append((_ca.solution_grid_scene(
        _wrong_rule_final(initial, table, final, s, k, rng)), "wrong_rule"))
    flip2 = _flip_cell(final, s, rng, avoid=flip1[1])
    distractors.append((_ca.solution_grid_scene(flip2[0]), "wrong_cell"))

    return {
        "puzzle": _puzzle_scene(initial, table, k),
        "solution": _ca.solution_grid_scene(final),
        "distractors": distractors,
        "structure": {
            "grid": n,
            "states": s,
            "steps": k,
            "rule": table.tolist(),
            "initial": initial.tolist(),
        },
    }


def _flip_cell(final: np.ndarray, s: int, rng: np.random.Generator,
               avoid: tuple | None = None):
    n = final.shape[0]
    while True:
        r, c = int(rng.integers(n)), int(rng.integers(n))
        if (r, c) == avoid:
            continue
        out = final.copy()
        out[r, c] = (out[r, c] + 1 + int(rng.integers(s - 1))) % s
        if out[r, c] != final[r, c]:
            return out, (r, c)


def _wrong_rule_final(initial, table, final, s, k, rng):
    for _ in range(64):
        r, c = int(rng.integers(s)), int(rng.integers(s))
        alt = table.copy()
        alt[r, c] = (alt[r, c] + 1 + int(rng.integers(s - 1))) % s
        if alt[r, c] == table[r, c]:
            continue
        out = _ca.simulate(initial, alt, k)
        if not np.array_equal(out, final):
            return out
    raise RetryGeneration("no rule perturbation changes the outcome")


def _puzzle_scene(initial: np.ndarray, table: np.ndarray, k: int) -> Scene:
    n = initial.shape[0]
    s = table.shape[0]
    gap = 2.5
    table_w = _ca.TICK_BAND + s * _ca.CELL
    w = 2 * _ca.MARGIN + n * _ca.CELL + gap + table_w
    h = 2 * _ca.MARGIN + _ca.LABEL_BAND + max(n * _ca.CELL, table_w)
    sc = Scene(w, h)
    oy = _ca.MARGIN + _ca.LABEL_BAND
    sc.add(Text(w / 2, _ca.MARGIN + _ca.LABEL_BAND / 2, f"T={k}", size=1.8))
    _ca.draw_state_grid(sc, _ca.MARGIN, oy, initial)
    tx = _ca.MARGIN + n * _ca.CELL + gap + _ca.TICK_BAND
    _ca.draw_rule_table(sc, tx, oy + _ca.TICK_BAND, table)
    return sc


def _compare_grids(expected: np.ndarray, got: np.ndarray) -> VerificationResult:
    if np.any(got < 0):
        bad = int((got < 0).sum())
        return VerificationResult.fail(
            "unreadable grid", check_name="unreadable", unreadable_cells=bad,
            total=int(got.size))
    diffs = np.argwhere(got != expected)
    if len(diffs) == 0:
        return VerificationResult.ok(check_name="cells", diff_cells=0,
                                     total=int(got.size))
    first = diffs[0].tolist()
    return VerificationResult.fail(
        f"{len(diffs)} of {got.size} cells differ", check_name="cells",
        diff_cells=int(len(diffs)), total=int(got.size), first_mismatch=first)


def verify(instance, candidate: RasterImage) -> VerificationResult:
    st = instance.structure
    n, s, k = st["grid"], st["states"], st["steps"]
    expected = _ca.simulate(np.array(st["initial"], dtype=np.int16),
                            np.array(st["rule"], dtype=np.int16), k)
    geom = _ca.solution_grid_geometry(n, candidate.width)
    got = sample_grid(candidate, geom, list(CA_STATE_COLORS[:s]), mode="center")
    return _compare_grids(expected, got)
