from collections.abc import Iterator, Mapping, Sequence

import numpy as np

from buchi_rl.automata.models import TRAP, Ldba
from buchi_rl.envs.models import LabeledMdp
from buchi_rl.product.models import ProductAction, ProductState
from buchi_rl.product.transitions import available_actions

Key = tuple[int, int]


class QTable:
    """Collapsed Q-function keyed on (s, q); the counter never enters a key.

    Entries that were never written read as `optimistic_init`.
    """

    def __init__(self, optimistic_init: float) -> None:
        self.optimistic_init = optimistic_init
        self.values: dict[tuple[Key, ProductAction], float] = {}

    def __len__(self) -> int:
        return len(self.values)

    def get(self, key: Key, act: ProductAction) -> float:
        return self.values.get((key, act), self.optimistic_init)

    def set(self, key: Key, act: ProductAction, value: float) -> None:
        self.values[(key, act)] = value

    def best_value(self, key: Key, actions: Sequence[ProductAction]) -> float:
        return max(self.get(key, act) for act in actions)

    def greedy(self, key: Key, actions: Sequence[ProductAction]) -> ProductAction:
        """Argmax over `actions`, ties to the first (lowest-indexed) one."""
        best, best_value = actions[0], self.get(key, actions[0])
        for act in actions[1:]:
            value = self.get(key, act)
            if value > best_value:
                best, best_value = act, value
        return best


def epsilon_greedy(
    q: QTable,
    key: Key,
    actions: Sequence[ProductAction],
    epsilon: float,
    rng: np.random.Generator,
) -> ProductAction:
    if rng.random() < epsilon:
        return actions[int(rng.integers(len(actions)))]
    return q.greedy(key, actions)


def q_update(
    q: QTable,
    key: Key,
    act: ProductAction,
    reward: float,
    discount: float,
    next_key: Key,
    next_actions: Sequence[ProductAction],
    alpha: float,
) -> float:
    old = q.get(key, act)
    target = reward + discount * q.best_value(next_key, next_actions)
    value = old + alpha * (target - old)
    q.set(key, act, value)
    return value


class GreedyPolicy(Mapping):
    """Greedy policy of a Q-table, evaluated lazily at (s, q)."""

    def __init__(self, q: QTable, m: LabeledMdp, a: Ldba) -> None:
        self.q, self.m, self.a = q, m, a

    def __getitem__(self, key: Key) -> ProductAction:
        s, state = key
        if not (0 <= s < self.m.n_states and (state == TRAP or state in self.a.states)):
            raise KeyError(key)
        return self.q.greedy(key, available_actions(self.m, self.a, ProductState(s, state, 0)))

    def __iter__(self) -> Iterator[Key]:
        for s in self.m.states:
            for state in (*self.a.states, TRAP):
                yield (s, state)

    def __len__(self) -> int:
        return self.m.n_states * (self.a.n_states + 1)


def extract_policy(q: QTable, product) -> dict[Key, ProductAction]:
    """Greedy action at every (s, q) pair of an enumerated product."""
    m, a = product.mdp, product.automaton
    policy: dict[Key, ProductAction] = {}
    for st in product.states:
        key = (st.s, st.q)
        if key not in policy:
            policy[key] = q.greedy(key, available_actions(m, a, st))
    return policy
