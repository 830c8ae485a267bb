"""Task 5: visual logic grids over Latin squares.

Symbols carry a unique color (how the verifier reads them) and a shape
class (circle or square) that adjacency constraints talk about.  The
constraint catalog: placement (cell holds symbol), exclusion (cell must
not hold symbol), adjacency-same / adjacency-different (neighboring
cells share / differ in shape class).  Constraints are added greedily,
cycling the allowed types, until backtracking certifies a unique
solution, then padded with redundant true constraints up to the target
count.  Verification votes cell colors, then checks Latin validity,
constraint satisfaction, and exact match, in that order.
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
from puzzlebench.scene import (
    INK,
    SYMBOL_COLORS,
    Circle,
    Line,
    Polygon,
    Rect,
    Scene,
    Text,
)
from puzzlebench.vision import sample_grid, grid_geometry

TASK = TaskDescriptor(
    task_id=5, name="logic_grid", domain="logical", binary=False,
    axes=(
        DifficultyRange("grid", 3, 8, {"easy": 4, "medium": 5, "hard": 6}),
        DifficultyRange("constraints", 4, 20, {"easy": 6, "medium": 10, "hard": 16}),
        DifficultyRange("types", 1, 4, {"easy": 2, "medium": 3, "hard": 4}),
    ))

VIOLATIONS = {"constraint_violation", "symbol_swap", "non_unique"}

EXPECTED_CHECKS = {
    "constraint_violation": {"constraint"},
    "symbol_swap": {"latin"},
    "non_unique": {"constraint"},
}

_CELL = 2.0
_MARGIN = 1.5
_LEGEND_BAND = 2.4

SHAPE_CLASSES = ("circle", "square")


def shape_class(symbol: int) -> int:
    return symbol % 2


# ---------------------------------------------------------------------------
# constraint model and solver
# ---------------------------------------------------------------------------

def _constraint_holds(con: dict, grid) -> bool:
    t = con["type"]
    if t == "placement":
        return grid[con["row"]][con["col"]] == con["symbol"]
    if t == "exclusion":
        return grid[con["row"]][con["col"]] != con["symbol"]
    (r1, c1), (r2, c2) = con["a"], con["b"]
    same = shape_class(grid[r1][c1]) == shape_class(grid[r2][c2])
    return same if t == "adj_same" else not same


def solve(n: int, givens: dict, constraints: list[dict], limit: int | None = 2):
    """Enumerate Latin squares satisfying givens + constraints.

    Stops after `limit` solutions (None enumerates everything).
    """
    placements: dict[tuple[int, int], int] = dict(givens)
    exclusions: dict[tuple[int, int], set[int]] = {}
    adj_at: dict[tuple[int, int], list[dict]] = {}
    for con in constraints:
        t = con["type"]
        if t == "placement":
            rc = (con["row"], con["col"])
            if rc in placements and placements[rc] != con["symbol"]:
                return []
            placements[rc] = con["symbol"]
        elif t == "exclusion":
            exclusions.setdefault((con["row"], con["col"]), set()).add(con["symbol"])
        else:
            later = max(tuple(con["a"]), tuple(con["b"]))
            adj_at.setdefault(later, []).append(con)

    grid = [[-1] * n for _ in range(n)]
    row_used = [set() for _ in range(n)]
    col_used = [set() for _ in range(n)]
    out: list[tuple] = []

    def try_place(r: int, c: int, s: int) -> bool:
        if s in row_used[r] or s in col_used[c]:
            return False
        forced = placements.get((r, c))
        if forced is not None and forced != s:
            return False
        if s in exclusions.get((r, c), ()):
            return False
        grid[r][c] = s
        for con in adj_at.get((r, c), ()):
            if not _constraint_holds(con, grid):
                grid[r][c] = -1
                return False
        row_used[r].add(s)
        col_used[c].add(s)
        return True

    def backtrack(idx: int) -> bool:
        if idx == n * n:
            out.append(tuple(tuple(row) for row in grid))
            return limit is not None and len(out) >= limit
        r, c = divmod(idx, n)
        for s in range(n):
            if try_place(r, c, s):
                if backtrack(idx + 1):
                    return True
                grid[r][c] = -1
                row_used[r].discard(s)
                col_used[c].discard(s)
        return False

    backtrack(0)
    return out


def _latin_square(n: int, rng: np.random.Generator):
    base = [[(r + c) % n for c in range(n)] for r in range(n)]
    rows = rng.permutation(n)
    cols = rng.permutation(n)
    rename = rng.permutation(n)
    return [[int(rename[base[rows[r]][cols[c]]]) for c in range(n)]
            for r in range(n)]


def _true_candidates(solution, n: int, givens: dict, allowed: list[str],
                     rng: np.random.Generator) -> dict[str, list[dict]]:
    cands: dict[str, list[dict]] = {t: [] for t in allowed}
    for r in range(n):
        for c in range(n):
            if (r, c) in givens:
                continue
            if "placement" in cands:
                cands["placement"].append(
                    {"type": "placement", "symbol": solution[r][c],
                     "row": r, "col": c})
            if "exclusion" in cands:
                for s in range(n):
                    if s != solution[r][c]:
                        cands["exclusion"].append(
                            {"type": "exclusion", "symbol": s, "row": r, "col": c})
    for r in range(n):
        for c in range(n):
            for (r2, c2) in ((r, c + 1), (r + 1, c)):
                if r2 >= n or c2 >= n:
                    continue
                same = shape_class(solution[r][c]) == shape_class(solution[r2][c2])
                t = "adj_same" if same else "adj_diff"
                if t in cands:
                    cands[t].append({"type": t, "a": [r, c], "b": [r2, c2]})
    for t in cands:
        order = rng.permutation(len(cands[t]))
        cands[t] = [cands[t][int(i)] for i in order]
    return cands


def generate(params: dict, rng: np.random.Generator) -> dict:
    n = int(params["grid"])
    budget = int(params["constraints"])
    n_types = int(params["types"])
    if not (3 <= n <= 8 and 4 <= budget <= 20 and 1 <= n_types <= 4):
        raise ValueError(f"logic_grid params out of range: {params}")
    allowed = ["placement", "exclusion", "adj_diff", "adj_same"][:n_types]

    solution = _latin_square(n, rng)
    given_cells = [divmod(int(i), n) for i in
                   rng.choice(n * n, size=max(1, n // 2), replace=False)]
    givens = {(r, c): solution[r][c] for r, c in given_cells}

    cands = _true_candidates(solution, n, givens, allowed, rng)
    constraints: list[dict] = []
    unique = False
    ti = 0
    while len(constraints) < budget:
        for _ in range(len(allowed)):
            t = allowed[ti % len(allowed)]
            ti += 1
            if cands[t]:
                constraints.append(cands[t].pop())
                break
        else:
            break  # every candidate pool exhausted
        sols = solve(n, givens, constraints, limit=2)
        if len(sols) == 1:
            # every constraint is true of the target square, so a unique
            # survivor can only be the target itself
            assert sols[0] == tuple(tuple(r) for r in solution)
            unique = True
            break
    if not unique:
        raise RetryGeneration("constraint budget exhausted before uniqueness")

    alts = _alternatives(n, givens, constraints, solution)
    if len(alts) < 2:
        raise RetryGeneration("not enough single-drop alternative squares")

    # pad with redundant constraints that also hold for every alternative,
    # so each alternative keeps violating exactly its dropped constraint
    while len(constraints) < budget:
        for _ in range(len(allowed)):
            t = allowed[ti % len(allowed)]
            ti += 1
            while cands[t]:
                con = cands[t].pop()
                if all(_constraint_holds(con, alt) for _, alt in alts):
                    constraints.append(con)
                    break
            if len(constraints) == budget:
                break
        else:
            raise RetryGeneration("cannot pad constraints to target count")

    for i, con in enumerate(constraints):
        con["id"] = f"c{i:02d}"

    swap1 = _symbol_swap(solution, n, rng)
    distractor_grids = [
        (alts[0][1], "constraint_violation"),
        (swap1, "symbol_swap"),
        (alts[1][1], "non_unique"),
    ]
    if len(alts) >= 3:
        distractor_grids.append((alts[2][1], "constraint_violation"))
    else:
        distractor_grids.append((_symbol_swap(solution, n, rng, avoid=swap1),
                                 "symbol_swap"))

    structure = {
        "grid": n,
        "solution": [list(row) for row in solution],
        "givens": [[r, c, s] for (r, c), s in sorted(givens.items())],
        "constraints": constraints,
        "types": allowed,
    }
    return {
        "puzzle": _puzzle_scene(n, givens, constraints),
        "solution": _grid_scene(n, solution),
        "distractors": [(_grid_scene(n, g), v) for g, v in distractor_grids],
        "structure": structure,
    }


def _alternatives(n, givens, constraints, solution):
    """Alternative squares obtained by ignoring one constraint each.

    Dropping constraint c and solving the rest yields squares that
    violate exactly c relative to the full set (uniqueness guarantees
    they are not the true solution, and distinct drops give distinct
    squares).
    """
    sol_t = tuple(tuple(r) for r in solution)
    alts = []
    for i in range(len(constraints) - 1, -1, -1):
        rest = constraints[:i] + constraints[i + 1:]
        for cand in solve(n, givens, rest, limit=2):
            if cand != sol_t:
                alts.append((i, [list(r) for r in cand]))
                break
        if len(alts) == 3:
            break
    return alts


def _symbol_swap(solution, n, rng, avoid=None):
    for _ in range(64):
        r = int(rng.integers(n))
        c1, c2 = sorted(int(x) for x in rng.choice(n, size=2, replace=False))
        g = [list(row) for row in solution]
        g[r][c1], g[r][c2] = g[r][c2], g[r][c1]
        if g != avoid:
            return g
    raise RetryGeneration("no usable symbol swap")


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def _symbol_item(cx, cy, radius, symbol):
    color = SYMBOL_COLORS[symbol]
    if shape_class(symbol) == 0:
        return Circle(cx, cy, radius, fill=color)
    return Rect(cx - radius, cy - radius, 2 * radius, 2 * radius, fill=color)


def _grid_frame(sc: Scene, n: int, ox: float, oy: float) -> None:
    for k in range(n + 1):
        w = 0.1 if k in (0, n) else 0.05
        sc.add(Line(ox, oy + k * _CELL, ox + n * _CELL, oy + k * _CELL,
                    color=INK, width=w))
        sc.add(Line(ox + k * _CELL, oy, ox + k * _CELL, oy + n * _CELL,
                    color=INK, width=w))


def _grid_scene(n: int, grid) -> Scene:
    side = 2 * _MARGIN + n * _CELL
    sc = Scene(side, side)
    _grid_frame(sc, n, _MARGIN, _MARGIN)
    for r in range(n):
        for c in range(n):
            cx = _MARGIN + (c + 0.5) * _CELL
            cy = _MARGIN + (r + 0.5) * _CELL
            sc.add(_symbol_item(cx, cy, 0.62, grid[r][c]))
    return sc


def _puzzle_scene(n: int, givens: dict, constraints: list[dict]) -> Scene:
    side = 2 * _MARGIN + n * _CELL
    sc = Scene(side, side + _LEGEND_BAND)
    ox = oy = _MARGIN
    _grid_frame(sc, n, ox, oy)
    for (r, c), s in sorted(givens.items()):
        sc.add(_symbol_item(ox + (c + 0.5) * _CELL, oy + (r + 0.5) * _CELL, 0.62, s))
    for con in constraints:
        _draw_constraint(sc, ox, oy, con)
    ly = oy + n * _CELL + _LEGEND_BAND / 2
    for s in range(n):
        lx = ox + (s + 0.5) * (n * _CELL / n)
        sc.add(_symbol_item(lx, ly, 0.4, s))
        sc.add(Text(lx, ly + 0.85, str(s + 1), size=0.8))
    return sc


def _draw_constraint(sc: Scene, ox: float, oy: float, con: dict) -> None:
    t = con["type"]
    if t == "placement":
        cx = ox + con["col"] * _CELL + 0.45
        cy = oy + con["row"] * _CELL + 0.45
        sc.add(_symbol_item(cx, cy, 0.26, con["symbol"]))
        sc.add(Line(cx + 0.32, cy + 0.32, cx + 0.62, cy + 0.62,
                    color=INK, width=0.07))
        sc.add(Polygon(((cx + 0.66, cy + 0.66), (cx + 0.62, cy + 0.4),
                        (cx + 0.4, cy + 0.62)), fill=INK))
    elif t == "exclusion":
        cx = ox + (con["col"] + 1) * _CELL - 0.45
        cy = oy + con["row"] * _CELL + 0.45
        sc.add(_symbol_item(cx, cy, 0.26, con["symbol"]))
        sc.add(Line(cx - 0.34, cy - 0.34, cx + 0.34, cy + 0.34, color=INK, width=0.09))
        sc.add(Line(cx - 0.34, cy + 0.34, cx + 0.34, cy - 0.34, color=INK, width=0.09))
    else:
        (r1, c1), (r2, c2) = con["a"], con["b"]
        mx = ox + (c1 + c2 + 1) / 2 * _CELL
        my = oy + (r1 + r2 + 1) / 2 * _CELL
        sc.add(Line(mx - 0.3, my - 0.12, mx + 0.3, my - 0.12, color=INK, width=0.09))
        sc.add(Line(mx - 0.3, my + 0.12, mx + 0.3, my + 0.12, color=INK, width=0.09))
        if t == "adj_diff":
            sc.add(Line(mx - 0.2, my + 0.38, mx + 0.2, my - 0.38,
                        color=INK, width=0.09))


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

def verify(instance, candidate: RasterImage) -> VerificationResult:
    st = instance.structure
    n = st["grid"]
    side = 2 * _MARGIN + n * _CELL
    geom = grid_geometry(side, side, candidate.width, (_MARGIN, _MARGIN),
                         _CELL, n, n)
    got = sample_grid(candidate, geom, list(SYMBOL_COLORS[:n]), mode="vote")
    if np.any(got < 0):
        r, c = np.argwhere(got < 0)[0].tolist()
        return VerificationResult.fail("unreadable cell", check_name="unreadable",
                                       cell=[r, c])
    grid = got.tolist()
    for r in range(n):
        if sorted(grid[r]) != list(range(n)):
            return VerificationResult.fail(
                f"row {r} is not a permutation", check_name="latin",
                row=r, values=grid[r])
    for c in range(n):
        col = [grid[r][c] for r in range(n)]
        if sorted(col) != list(range(n)):
            return VerificationResult.fail(
                f"column {c} is not a permutation", check_name="latin",
                col=c, values=col)
    for con in st["constraints"]:
        if not _constraint_holds(con, grid):
            return VerificationResult.fail(
                f"constraint {con['id']} violated", check_name="constraint",
                constraint_id=con["id"], constraint_type=con["type"])
    if grid != st["solution"]:
        diffs = [[r, c] for r in range(n) for c in range(n)
                 if grid[r][c] != st["solution"][r][c]]
        return VerificationResult.fail(
            f"{len(diffs)} cells differ from the stored solution",
            check_name="mismatch", diff_cells=diffs)
    return VerificationResult.ok(check_name="exact", diff_cells=[])
