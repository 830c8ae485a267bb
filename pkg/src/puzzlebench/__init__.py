"""puzzlebench: deterministic visual-puzzle dataset generation and scoring.

Ten procedurally generated puzzle families (mazes, pattern matrices,
cellular automata, logic grids, graph problems, knot diagrams, voxel
projections) are rendered from vector scenes to PNG and verified by
deterministic computer-vision pipelines.  Everything downstream of a
64-bit seed is reproducible: puzzles, solutions, near-miss distractors,
dataset releases and evaluation scores.
"""

from puzzlebench.rng import derive_seed, make_rng

__version__ = "0.1.0"

__all__ = ["derive_seed", "make_rng", "__version__"]
