import numpy as np
import pytest

from buchi_rl.automata.bundled import load_automaton
from buchi_rl.automata.models import TRAP, Ldba
from buchi_rl.envs.builtin import frozen_lake8, office_world, probabilistic_gate
from buchi_rl.envs.models import LabeledMdp
from buchi_rl.product.models import ProductAction, ProductMdp, env_action, eps_action
from buchi_rl.product.schemas import linear_reward

UP, DOWN, LEFT, RIGHT = range(4)


@pytest.fixture(scope="session")
def gate() -> LabeledMdp:
    """Probabilistic gate grid."""
    return probabilistic_gate()


@pytest.fixture(scope="session")
def frozen_lake() -> LabeledMdp:
    return frozen_lake8()


@pytest.fixture(scope="session")
def office() -> LabeledMdp:
    return office_world()


@pytest.fixture(scope="session")
def fga_gnc() -> Ldba:
    """LDBA for F G a & G !c."""
    return load_automaton("fga_gnc")


@pytest.fixture(scope="session")
def frozen_lake_ldba() -> Ldba:
    return load_automaton("frozen_lake")


@pytest.fixture(scope="session")
def office_ldba() -> Ldba:
    return load_automaton("office_world")


@pytest.fixture(scope="session")
def gate_product(gate: LabeledMdp, fga_gnc: Ldba) -> ProductMdp:
    return ProductMdp(gate, fga_gnc, linear_reward(10, 0.1, 0.99))


def make_gate_policy(gate: LabeledMdp) -> dict[tuple[int, int], ProductAction]:
    """Optimal gate policy: go down through the gate, then right along the
    lower corridor, and jump to the accepting component at the `a` sink."""
    policy = {
        (s, q): env_action(RIGHT) for s in gate.states for q in (0, 1, TRAP)
    }
    policy[(gate.init, 0)] = env_action(DOWN)
    policy[(gate.index(2, 9), 0)] = eps_action(1)
    return policy


@pytest.fixture(scope="session")
def gate_policy(gate: LabeledMdp) -> dict[tuple[int, int], ProductAction]:
    return make_gate_policy(gate)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


def chain_mdp(n: int = 2, labels=None) -> LabeledMdp:
    """Deterministic cycle 0 -> 1 -> ... -> n-1 -> 0 with a single action."""
    labels = labels or [frozenset()] * n
    return LabeledMdp(
        n_states=n,
        init=0,
        action_names=("go",),
        available=tuple((0,) for _ in range(n)),
        transitions={(s, 0): (((s + 1) % n, 1.0),) for s in range(n)},
        labels=tuple(labels),
        name=f"chain{n}",
    )


def random_mdp(rng: np.random.Generator, n: int = 5, actions: int = 2) -> LabeledMdp:
    """Small random MDP over the atoms a and c."""
    transitions = {}
    for s in range(n):
        for a in range(actions):
            k = int(rng.integers(1, 3))
            targets = rng.choice(n, size=k, replace=False)
            weights = rng.random(k) + 0.1
            weights = weights / weights.sum()
            weights[-1] = 1.0 - weights[:-1].sum()
            transitions[(s, a)] = tuple(
                (int(t), float(p)) for t, p in zip(targets, weights)
            )
    labels = []
    for _ in range(n):
        u = rng.random()
        labels.append(frozenset({"a"}) if u < 0.5 else frozenset({"c"}) if u < 0.6 else frozenset())
    return LabeledMdp(
        n_states=n,
        init=0,
        action_names=tuple(f"a{i}" for i in range(actions)),
        available=tuple(tuple(range(actions)) for _ in range(n)),
        transitions=transitions,
        labels=tuple(labels),
        name="random",
    )
