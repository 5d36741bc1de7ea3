"""Exact evaluation of policies on the product MDP."""

from buchi_rl.mc.bounds import (
    discounted_reward_bounds,
    loose_constants,
    tight_hyperparameters,
)
from buchi_rl.mc.dtmc import (
    Policy,
    bsccs,
    buchi_probability,
    expected_discounted_reward,
    induce_dtmc,
)
from buchi_rl.mc.mdp import (
    max_buchi_values,
    maximal_end_components,
    mdp_max_buchi_probability,
    optimal_satisfaction,
)
from buchi_rl.mc.models import BsccDecomposition, Dtmc, Row, StateValues
from buchi_rl.mc.prism import dump_jsonl, export_prism, parse_prism
from buchi_rl.mc.simulate import simulate_buchi

__all__ = [
    "discounted_reward_bounds",
    "loose_constants",
    "tight_hyperparameters",
    "Policy",
    "bsccs",
    "buchi_probability",
    "expected_discounted_reward",
    "induce_dtmc",
    "max_buchi_values",
    "maximal_end_components",
    "mdp_max_buchi_probability",
    "optimal_satisfaction",
    "BsccDecomposition",
    "Dtmc",
    "Row",
    "StateValues",
    "dump_jsonl",
    "export_prism",
    "parse_prism",
    "simulate_buchi",
]
