from dataclasses import dataclass, field
from typing import NamedTuple

from buchi_rl.automata.models import Ldba
from buchi_rl.envs.models import LabeledMdp
from buchi_rl.product.schemas import RewardStructure

ENV = "env"
EPS = "eps"


class ProductState(NamedTuple):
    s: int
    q: int
    n: int


class ProductAction(NamedTuple):
    """Environment action `Env(a)` or ε-move `Eps(q̂)`.

    Tuple order puts every env action before every ε-move, which is the
    lowest-index tie-break used by greedy selection.
    """

    kind: str
    index: int

    def __str__(self) -> str:
        return f"{self.kind}:{self.index}"


def env_action(a: int) -> ProductAction:
    return ProductAction(ENV, a)


def eps_action(q: int) -> ProductAction:
    return ProductAction(EPS, q)


class ProductTransition(NamedTuple):
    source: ProductState
    action: ProductAction
    target: ProductState
    probability: float
    reward: float
    discount: float


class Edge(NamedTuple):
    target: int
    probability: float
    reward: float
    discount: float


@dataclass
class ExplicitProduct:
    """Reachable fragment of a product MDP, states numbered in BFS order."""

    mdp: LabeledMdp
    automaton: Ldba
    rewards: RewardStructure
    states: list[ProductState] = field(default_factory=list)
    index: dict[ProductState, int] = field(default_factory=dict)
    actions: list[tuple[ProductAction, ...]] = field(default_factory=list)
    edges: dict[tuple[int, ProductAction], tuple[Edge, ...]] = field(
        default_factory=dict
    )
    init: int = 0

    def __len__(self) -> int:
        return len(self.states)

    def is_accepting(self, i: int) -> bool:
        return self.automaton.is_accepting(self.states[i].q)


class ProductMdp(NamedTuple):
    """Product definition without enumeration; transitions come on the fly."""

    mdp: LabeledMdp
    automaton: Ldba
    rewards: RewardStructure
