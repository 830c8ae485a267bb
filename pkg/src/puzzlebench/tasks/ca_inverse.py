"""Task 4: cellular automaton rule inference.

The puzzle shows an initial grid, the grid k steps later, and the step
count; the answer is the rendered rule table.  Initial states are
resampled until the trajectory exercises every (state, neighbor-sum)
table entry, so the displayed pair pins the table down uniquely.
Verification reads the candidate's table entries and compares them one
by one.
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
from puzzlebench.tasks.ca_forward import _compare_grids
from puzzlebench.vision import sample_grid

TASK = TaskDescriptor(
    task_id=4, name="ca_inverse", domain="pattern", binary=False,
    axes=(
        DifficultyRange("grid", 4, 64, {"easy": 8, "medium": 16, "hard": 32}),
        DifficultyRange("states", 2, 16, {"easy": 4, "medium": 8, "hard": 16}),
        DifficultyRange("steps", 1, 20, {"easy": 1, "medium": 2, "hard": 3}),
    ))

VIOLATIONS = {"off_by_one_rule", "transposed_rule", "partial_rule"}

EXPECTED_CHECKS = {v: {"cells"} for v in VIOLATIONS}


def generate(params: dict, rng: np.random.Generator) -> dict:
    n = int(params["grid"])
    s = int(params["states"])
    k = int(params["steps"])
    if not (4 <= n <= 64 and 2 <= s <= 16 and 1 <= k <= 20):
        raise ValueError(f"ca_inverse params out of range: {params}")

    table = rng.integers(0, s, size=(s, s)).astype(np.int16)
    if np.array_equal(table, table.T):
        raise RetryGeneration("symmetric rule table defeats the transpose distractor")

    full = {(a, b) for a in range(s) for b in range(s)}
    initial = None
    for _ in range(64):
        cand = rng.integers(0, s, size=(n, n)).astype(np.int16)
        if _ca.coverage(cand, table, k) == full:
            initial = cand
            break
    if initial is None:
        raise RetryGeneration("rule-entry coverage not achieved")
    final = _ca.simulate(initial, table, k)

    distractors = []
    t1, e1 = _off_by_one(table, s, rng)
    distractors.append((_ca.solution_table_scene(t1), "off_by_one_rule"))
    distractors.append((_ca.solution_table_scene(table.T.copy()), "transposed_rule"))
    distractors.append((_ca.solution_table_scene(_partial(table, rng)), "partial_rule"))
    t2, _ = _off_by_one(table, s, rng, avoid=e1)
    distractors.append((_ca.solution_table_scene(t2), "off_by_one_rule"))

    return {
        "puzzle": _puzzle_scene(initial, final, k),
        "solution": _ca.solution_table_scene(table),
        "distractors": distractors,
        "structure": {
            "grid": n,
            "states": s,
            "steps": k,
            "rule": table.tolist(),
            "initial": initial.tolist(),
            "final": final.tolist(),
        },
    }


def _off_by_one(table: np.ndarray, s: int, rng: np.random.Generator,
                avoid: tuple | None = None):
    while True:
        r, c = int(rng.integers(s)), int(rng.integers(s))
        if (r, c) == avoid:
            continue
        out = table.copy()
        out[r, c] = (out[r, c] + 1) % s
        return out, (r, c)


def _partial(table: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Blank a block of trailing rows to the zero state."""
    s = table.shape[0]
    rows = max(1, s // 2)
    out = table.copy()
    out[s - rows:, :] = 0
    if np.array_equal(out, table):
        out = table.copy()
        out[:rows, :] = 0
        if np.array_equal(out, table):
            raise RetryGeneration("rule table too empty for a partial distractor")
    return out


def _puzzle_scene(initial: np.ndarray, final: np.ndarray, k: int) -> Scene:
    n = initial.shape[0]
    gap = 2.5
    w = 2 * _ca.MARGIN + 2 * n * _ca.CELL + gap
    h = 2 * _ca.MARGIN + _ca.LABEL_BAND + n * _ca.CELL
    sc = Scene(w, h)
    sc.add(Text(w / 2, _ca.MARGIN + _ca.LABEL_BAND / 2, f"T={k}", size=1.8))
    oy = _ca.MARGIN + _ca.LABEL_BAND
    _ca.draw_state_grid(sc, _ca.MARGIN, oy, initial)
    _ca.draw_state_grid(sc, _ca.MARGIN + n * _ca.CELL + gap, oy, final)
    return sc


def verify(instance, candidate: RasterImage) -> VerificationResult:
    st = instance.structure
    s = st["states"]
    expected = np.array(st["rule"], dtype=np.int16)
    geom = _ca.solution_table_geometry(s, candidate.width)
    got = sample_grid(candidate, geom, list(CA_STATE_COLORS[:s]), mode="center")
    res = _compare_grids(expected, got)
    if not res.passed and res.details.get("check_name") == "cells":
        det = dict(res.details)
        det["diff_entries"] = det.pop("diff_cells")
        return VerificationResult(False, res.reason.replace("cells", "entries"), det)
    return res
