"""Labelled MDPs and the bundled grid-world benchmarks."""

from buchi_rl.envs.builtin import (
    BUILTIN_ENVIRONMENTS,
    frozen_lake8,
    load_environment,
    office_world,
    probabilistic_gate,
)
from buchi_rl.envs.grid import compile_grid, load_grid, parse_grid, read_grid
from buchi_rl.envs.models import LabeledMdp, sample_transition

__all__ = [
    "BUILTIN_ENVIRONMENTS",
    "frozen_lake8",
    "load_environment",
    "office_world",
    "probabilistic_gate",
    "compile_grid",
    "load_grid",
    "parse_grid",
    "read_grid",
    "LabeledMdp",
    "sample_transition",
]
