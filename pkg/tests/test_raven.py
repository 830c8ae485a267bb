from __future__ import annotations

import numpy as np
import pytest

from puzzlebench.core import generate, verify
from puzzlebench.render import rasterize
from puzzlebench.rng import derive_seed
from puzzlebench.tasks import raven as raven_mod
from puzzlebench.vision import ssim


def _rule_table_oracle(rules, row, col):
    """Independent rule application: enumerate the 3x3 grid directly."""
    out = {}
    for rule in rules:
        if rule["kind"] == "constant":
            idx = 0
        elif rule["kind"] == "additive":
            idx = col
        else:
            idx = (row + col) % 3
        out[rule["attr"]] = rule["values"][idx]
    return out


def test_constant_rules_answer_equals_corner_tile():
    # degenerate all-constant instance (not in any release profile)
    inst = generate(2, "easy", 5, params={"rules": 0, "compositional": 0})
    rules = inst.structure["rules"]
    assert _rule_table_oracle(rules, 2, 2) == _rule_table_oracle(rules, 0, 0)


def test_additive_count_rule_matches_enumeration():
    for idx in range(6):
        inst = generate(2, "easy", derive_seed(42, 2, "easy", idx))
        rules = inst.structure["rules"]
        non_constant = [r for r in rules if r["kind"] != "constant"]
        assert len(non_constant) == 1
        assert non_constant[0]["kind"] == "additive"
        # answer tile must equal the oracle's value at column 2
        got = raven_mod._tile_attrs(rules, 2, 2)
        assert got == _rule_table_oracle(rules, 2, 2)
        assert got[non_constant[0]["attr"]] == non_constant[0]["values"][2]


def test_hard_has_three_rules_with_compositional():
    inst = generate(2, "hard", derive_seed(42, 2, "hard", 0))
    kinds = [r["kind"] for r in inst.structure["rules"] if r["kind"] != "constant"]
    assert len(kinds) == 3
    assert "compositional" in kinds


def test_medium_rules_additive_only():
    inst = generate(2, "medium", derive_seed(42, 2, "medium", 0))
    kinds = [r["kind"] for r in inst.structure["rules"] if r["kind"] != "constant"]
    assert kinds.count("additive") == 2 and len(kinds) == 2


@pytest.mark.parametrize("difficulty", ["easy", "medium", "hard"])
def test_solution_scores_one_and_passes(difficulty):
    inst = generate(2, difficulty, derive_seed(42, 2, difficulty, 1))
    img = rasterize(inst.solution, 512)
    res = verify(inst, img)
    assert res.passed
    assert res.details["ssim"] == 1.0


def test_distractors_fail_ssim_gate():
    for idx in range(4):
        inst = generate(2, "hard", derive_seed(42, 2, "hard", idx))
        truth = rasterize(inst.solution, 512)
        for scene, violation in inst.distractors:
            img = rasterize(scene, 512)
            score = ssim(truth, img)
            assert score < raven_mod.SSIM_THRESHOLD, (violation, score)
            res = verify(inst, img)
            assert not res.passed


def test_distractors_differ_in_exactly_one_attribute():
    # attribute-vector diff via the structural perturbation contract:
    # re-deriving each distractor's attrs from its violation must differ
    # from the answer in exactly that attribute's slot
    inst = generate(2, "medium", derive_seed(42, 2, "medium", 3))
    seen = [v for _, v in inst.distractors]
    assert len(seen) == 4
    base = {"wrong_shape", "wrong_color", "wrong_count"}
    assert base.issubset(set(seen))
    assert set(seen) - base <= {"wrong_rotation", "wrong_size"}


def test_rotation_substitution_recorded():
    # scan seeds until an instance with a rotation-symmetric answer shape
    found = False
    for idx in range(40):
        inst = generate(2, "easy", derive_seed(42, 2, "easy", idx))
        answer = raven_mod._tile_attrs(inst.structure["rules"], 2, 2)
        shape = raven_mod.SHAPES[answer["shape"]]
        if shape in ("circle", "square"):
            assert "wrong_size" in inst.violations
            assert inst.structure["rotation_substituted"] is True
            found = True
            break
    assert found, "no rotation-symmetric answer shape in 40 seeds"


def test_blank_tile_fails_with_score():
    inst = generate(2, "easy", 77)
    blank = rasterize(raven_mod.Scene(12, 12), 512)
    res = verify(inst, blank)
    assert not res.passed
    assert "ssim" in res.details


def test_determinism():
    a = generate(2, "hard", 31337)
    b = generate(2, "hard", 31337)
    assert a.metadata_json() == b.metadata_json()
    assert np.array_equal(rasterize(a.puzzle, 512).pixels,
                          rasterize(b.puzzle, 512).pixels)
