"""On-the-fly transition function of the K-counter product MDP."""

from typing import NamedTuple

from buchi_rl.automata.models import Ldba
from buchi_rl.envs.models import LabeledMdp
from buchi_rl.errors import UnavailableActionError
from buchi_rl.product.models import (
    ENV,
    ProductAction,
    ProductState,
    ProductTransition,
    env_action,
    eps_action,
)
from buchi_rl.product.schemas import RewardStructure


class AutomatonMove(NamedTuple):
    q: int
    n: int
    reward: float
    discount: float


def initial_state(m: LabeledMdp, a: Ldba) -> ProductState:
    return ProductState(m.init, a.initial, 0)


def available_actions(m: LabeledMdp, a: Ldba, st: ProductState) -> tuple[ProductAction, ...]:
    """Env actions of 𝒜(s) followed by the ε-moves of q, both in index order."""
    return tuple(env_action(x) for x in m.available[st.s]) + tuple(
        eps_action(q) for q in sorted(a.eps(st.q))
    )


def is_available(m: LabeledMdp, a: Ldba, st: ProductState, act: ProductAction) -> bool:
    if act.kind == ENV:
        return act.index in m.available[st.s]
    return act.index in a.eps(st.q)


def automaton_move(
    a: Ldba, rs: RewardStructure, q: int, n: int, label, epsilon: bool = False
) -> AutomatonMove:
    """Automaton and counter update for one product step.

    For a letter move `label` is L(s) and the successor may be TRAP; for an
    ε-move `q` is already the chosen target and the counter is kept.
    """
    target = q if epsilon else a.step(q, label)
    accepting = a.is_accepting(target)
    reward = rs.reward(n) if accepting else 0.0
    if accepting and not epsilon:
        n = min(n + 1, rs.K)
    return AutomatonMove(target, n, reward, rs.discount(reward))


def product_successors(
    m: LabeledMdp,
    a: Ldba,
    rs: RewardStructure,
    st: ProductState,
    act: ProductAction,
) -> list[ProductTransition]:
    if not is_available(m, a, st, act):
        raise UnavailableActionError(f"{act} is not available at {tuple(st)}")
    if act.kind == ENV:
        move = automaton_move(a, rs, st.q, st.n, m.label(st.s))
        return [
            ProductTransition(
                st,
                act,
                ProductState(s_next, move.q, move.n),
                p,
                move.reward,
                move.discount,
            )
            for s_next, p in m.distribution(st.s, act.index)
        ]
    move = automaton_move(a, rs, act.index, st.n, None, epsilon=True)
    return [
        ProductTransition(
            st, act, ProductState(st.s, move.q, move.n), 1.0, move.reward, move.discount
        )
    ]
