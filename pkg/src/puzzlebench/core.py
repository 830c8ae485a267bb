"""Shared puzzle types, the task registry, and generation dispatch.

Every task module registers a descriptor (id, name, domain, binary flag,
difficulty axes), per-level parameters, a ``generate(params, rng)``
builder and a ``verify(instance, candidate)`` checker.  Generation is a
pure function of (task_id, difficulty, seed); generators that can fail
internally raise :class:`RetryGeneration` and are re-run with a remixed
seed up to 64 times before erroring out.
"""

from __future__ import annotations

import importlib
import json
from dataclasses import dataclass, field

from puzzlebench.render import RasterImage
from puzzlebench.rng import make_rng, remix_seed
from puzzlebench.scene import RESOLUTIONS, Scene

DIFFICULTIES = ("easy", "medium", "hard")
DOMAINS = ("spatial", "pattern", "logical", "graph", "topology", "geometric")

MAX_ATTEMPTS = 64

_TASK_MODULES = {
    1: "puzzlebench.tasks.maze",
    2: "puzzlebench.tasks.raven",
    3: "puzzlebench.tasks.ca_forward",
    4: "puzzlebench.tasks.ca_inverse",
    5: "puzzlebench.tasks.logicgrid",
    6: "puzzlebench.tasks.coloring",
    7: "puzzlebench.tasks.isopair",
    8: "puzzlebench.tasks.unknot",
    9: "puzzlebench.tasks.ortho",
    10: "puzzlebench.tasks.isorec",
}


class RetryGeneration(Exception):
    """Raised by a generator attempt that should be retried with a new seed."""


class GenerationError(Exception):
    """Raised when a generator exhausts its retry budget."""


@dataclass(frozen=True)
class DifficultyRange:
    """One parameterized difficulty axis with its per-level values."""

    axis: str
    min: float
    max: float
    levels: dict[str, float]
    decreasing: bool = False

    def __post_init__(self):
        vals = [self.levels[d] for d in DIFFICULTIES]
        ordered = sorted(vals, reverse=self.decreasing)
        if vals != ordered:
            raise ValueError(f"axis {self.axis}: level values not monotone")
        if not all(self.min <= v <= self.max for v in vals):
            raise ValueError(f"axis {self.axis}: level values outside range")


@dataclass(frozen=True)
class TaskDescriptor:
    task_id: int
    name: str
    domain: str
    binary: bool
    axes: tuple[DifficultyRange, ...]


@dataclass(frozen=True)
class VerificationResult:
    passed: bool
    reason: str
    details: dict

    @staticmethod
    def ok(**details) -> "VerificationResult":
        return VerificationResult(True, "ok", details)

    @staticmethod
    def fail(reason: str, **details) -> "VerificationResult":
        return VerificationResult(False, reason, details)


@dataclass
class PuzzleInstance:
    task_id: int
    task_name: str
    seed: int
    difficulty: str
    params: dict
    domain: str
    puzzle: Scene
    solution: Scene
    distractors: list[tuple[Scene, str]]  # exactly 4 (scene, violation) pairs
    structure: dict = field(default_factory=dict)
    answer: bool | None = None

    @property
    def violations(self) -> list[str]:
        return [v for _, v in self.distractors]

    def metadata(self) -> dict:
        md = {
            "schema": "puzzlebench/1",
            "task_id": self.task_id,
            "task_name": self.task_name,
            "domain": self.domain,
            "binary": self.answer is not None,
            "seed": self.seed,
            "difficulty": self.difficulty,
            "params": self.params,
            "distractor_violations": self.violations,
            "structure": self.structure,
        }
        if self.answer is not None:
            md["answer"] = bool(self.answer)
        return md

    def metadata_json(self) -> str:
        return json.dumps(self.metadata(), sort_keys=True, indent=2) + "\n"


def _module(task_id: int):
    if task_id not in _TASK_MODULES:
        raise KeyError(f"unknown task id {task_id}")
    return importlib.import_module(_TASK_MODULES[task_id])


def list_tasks() -> list[TaskDescriptor]:
    return [_module(tid).TASK for tid in sorted(_TASK_MODULES)]


def task_by_name(name: str) -> TaskDescriptor:
    for t in list_tasks():
        if t.name == name:
            return t
    raise KeyError(f"unknown task name {name!r}")


def difficulty_axes(task_id: int) -> list[DifficultyRange]:
    return list(_module(task_id).TASK.axes)


def level_params(task_id: int, difficulty: str) -> dict:
    if difficulty not in DIFFICULTIES:
        raise KeyError(f"unknown difficulty {difficulty!r}")
    task = _module(task_id).TASK
    return {ax.axis: ax.levels[difficulty] for ax in task.axes}


def generate(task_id: int, difficulty: str, seed: int,
             params: dict | None = None) -> PuzzleInstance:
    """Build the complete puzzle instance for one (task, difficulty, seed)."""
    mod = _module(task_id)
    task: TaskDescriptor = mod.TASK
    if params is None:
        params = level_params(task_id, difficulty)
    last_err: Exception | None = None
    for attempt in range(MAX_ATTEMPTS):
        rng = make_rng(remix_seed(seed, attempt))
        try:
            parts = mod.generate(params, rng)
            break
        except RetryGeneration as err:
            last_err = err
    else:
        raise GenerationError(
            f"task {task_id} seed {seed}: no valid instance in "
            f"{MAX_ATTEMPTS} attempts ({last_err})")

    inst = PuzzleInstance(
        task_id=task.task_id, task_name=task.name, seed=seed,
        difficulty=difficulty, params=dict(params), domain=task.domain,
        puzzle=parts["puzzle"], solution=parts["solution"],
        distractors=parts["distractors"], structure=parts["structure"],
        answer=parts.get("answer"))
    _check_instance(task, inst)
    return inst


def _check_instance(task: TaskDescriptor, inst: PuzzleInstance) -> None:
    if len(inst.distractors) != 4:
        raise GenerationError(f"task {task.task_id}: expected 4 distractors, "
                              f"got {len(inst.distractors)}")
    catalog = _module(task.task_id).VIOLATIONS
    for _, v in inst.distractors:
        if v not in catalog:
            raise GenerationError(f"task {task.task_id}: violation {v!r} "
                                  f"not in catalog {sorted(catalog)}")
    axis_names = {ax.axis for ax in task.axes}
    if set(inst.params) != axis_names:
        raise GenerationError(f"task {task.task_id}: params {sorted(inst.params)} "
                              f"do not match axes {sorted(axis_names)}")


def verify(instance: PuzzleInstance, candidate: RasterImage) -> VerificationResult:
    """Run the task-specific verifier on a candidate solution image."""
    guard = check_canonical(candidate)
    if guard is not None:
        return guard
    return _module(instance.task_id).verify(instance, candidate)


def check_canonical(candidate: RasterImage) -> VerificationResult | None:
    h, w = candidate.pixels.shape[:2]
    if h != w or h not in RESOLUTIONS:
        return VerificationResult.fail(
            "unsupported resolution", width=w, height=h,
            expected=list(RESOLUTIONS))
    return None


def expected_checks(task_id: int) -> dict[str, set[str]]:
    """Violation type -> diagnostic classes its distractors must trip."""
    return _module(task_id).EXPECTED_CHECKS
