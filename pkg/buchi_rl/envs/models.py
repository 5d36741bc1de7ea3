from bisect import bisect_right
from dataclasses import dataclass, field
from itertools import accumulate
from typing import Optional

import numpy as np

from buchi_rl.errors import UnavailableActionError
from buchi_rl.ltl.models import EMPTY_LETTER, Letter

PROBABILITY_TOLERANCE = 1e-12
SELF_LOOP_ACTION = "stay"


@dataclass(frozen=True)
class LabeledMdp:
    """Finite MDP with a labelling function and a single initial state.

    `transitions[(s, a)]` is a tuple of (next state, probability) pairs with
    positive probabilities; `available[s]` lists the action indices of 𝒜(s).
    States left without actions get a self-loop action appended on
    construction.
    """

    n_states: int
    init: int
    action_names: tuple[str, ...]
    available: tuple[tuple[int, ...], ...]
    transitions: dict[tuple[int, int], tuple[tuple[int, float], ...]]
    labels: tuple[Letter, ...]
    name: str = "mdp"
    shape: Optional[tuple[int, int]] = None
    _samplers: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        if not 0 <= self.init < self.n_states:
            raise ValueError(f"initial state {self.init} out of range")
        if len(self.labels) != self.n_states or len(self.available) != self.n_states:
            raise ValueError("labels and action sets must cover every state")
        object.__setattr__(
            self, "labels", tuple(frozenset(x) for x in self.labels)
        )
        if any(not acts for acts in self.available):
            self._complete_self_loops()
        for s, acts in enumerate(self.available):
            for a in acts:
                row = self.transitions.get((s, a))
                if not row:
                    raise ValueError(f"no distribution for state {s}, action {a}")
                total = sum(p for _, p in row)
                if any(p < 0 for _, p in row) or abs(total - 1.0) > PROBABILITY_TOLERANCE:
                    raise ValueError(
                        f"distribution of ({s}, {a}) sums to {total}, expected 1"
                    )
                if any(not 0 <= t < self.n_states for t, _ in row):
                    raise ValueError(f"successor out of range at ({s}, {a})")
                targets = [t for t, p in row if p > 0]
                cumulative = list(accumulate(p for _, p in row if p > 0))
                self._samplers[(s, a)] = (targets, cumulative)

    def _complete_self_loops(self) -> None:
        names = self.action_names
        if SELF_LOOP_ACTION not in names:
            names = names + (SELF_LOOP_ACTION,)
        loop = names.index(SELF_LOOP_ACTION)
        available = []
        transitions = dict(self.transitions)
        for s, acts in enumerate(self.available):
            if not acts:
                acts = (loop,)
                transitions[(s, loop)] = ((s, 1.0),)
            available.append(tuple(acts))
        object.__setattr__(self, "action_names", names)
        object.__setattr__(self, "available", tuple(available))
        object.__setattr__(self, "transitions", transitions)

    @property
    def states(self) -> range:
        return range(self.n_states)

    def label(self, s: int) -> Letter:
        return self.labels[s] if self.labels[s] else EMPTY_LETTER

    def distribution(self, s: int, a: int) -> tuple[tuple[int, float], ...]:
        if a not in self.available[s]:
            raise UnavailableActionError(
                f"action {a} is not available in state {s}"
            )
        return self.transitions[(s, a)]

    def p_min(self) -> float:
        """Smallest nonzero transition probability."""
        return min(
            p
            for s, acts in enumerate(self.available)
            for a in acts
            for _, p in self.transitions[(s, a)]
            if p > 0
        )

    def index(self, row: int, col: int) -> int:
        if self.shape is None:
            raise ValueError(f"{self.name} is not a grid")
        return row * self.shape[1] + col


def sample_transition(m: LabeledMdp, s: int, a: int, rng: np.random.Generator) -> int:
    """Draw a successor of (s, a); consumes exactly one uniform from `rng`."""
    sampler = m._samplers.get((s, a))
    if sampler is None:
        raise UnavailableActionError(f"action {a} is not available in state {s}")
    targets, cumulative = sampler
    u = rng.random() * cumulative[-1]
    return targets[min(bisect_right(cumulative, u), len(targets) - 1)]
