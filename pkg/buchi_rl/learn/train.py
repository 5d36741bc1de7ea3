"""Tabular Q-learning on the K-counter product, with and without
counterfactual imagining over automaton states."""

import logging
import time

import numpy as np

from buchi_rl.automata.models import TRAP, Ldba
from buchi_rl.envs.models import LabeledMdp, sample_transition
from buchi_rl.learn.qtable import GreedyPolicy, QTable, epsilon_greedy, q_update
from buchi_rl.learn.schemas import Hyperparams, TrainResult
from buchi_rl.mc.dtmc import buchi_probability, induce_dtmc
from buchi_rl.product.models import (
    ENV,
    ProductAction,
    ProductMdp,
    ProductState,
    ProductTransition,
)
from buchi_rl.product.schemas import RewardStructure, constant_reward
from buchi_rl.product.transitions import (
    automaton_move,
    available_actions,
    initial_state,
)

logger = logging.getLogger(__name__)


def counterfactual_transitions(
    m: LabeledMdp,
    a: Ldba,
    rs: RewardStructure,
    st: ProductState,
    act: ProductAction,
    s_next: int,
) -> list[ProductTransition]:
    """Imagined transitions for every automaton state q̄ at which `act` is
    available, sharing the real environment outcome `s_next` and counter."""
    out = []
    if act.kind == ENV:
        label = m.label(st.s)
        probability = dict(m.distribution(st.s, act.index))[s_next]
        for q_bar in (*a.states, TRAP):
            move = automaton_move(a, rs, q_bar, st.n, label)
            source = ProductState(st.s, q_bar, st.n)
            target = ProductState(s_next, move.q, move.n)
            out.append(
                ProductTransition(
                    source, act, target, probability, move.reward, move.discount
                )
            )
        return out
    for q_bar in a.states:
        if act.index in a.eps(q_bar):
            move = automaton_move(a, rs, act.index, st.n, None, epsilon=True)
            out.append(
                ProductTransition(
                    ProductState(st.s, q_bar, st.n),
                    act,
                    ProductState(st.s, move.q, move.n),
                    1.0,
                    move.reward,
                    move.discount,
                )
            )
    return out


def evaluate_greedy(q: QTable, m: LabeledMdp, a: Ldba) -> float:
    """Exact satisfaction probability of the greedy policy.

    The greedy policy ignores the counter, so the chain is induced on the
    K=0 product.
    """
    product = ProductMdp(m, a, constant_reward(1.0))
    d = induce_dtmc(product, GreedyPolicy(q, m, a))
    return buchi_probability(d).initial


def train(
    m: LabeledMdp,
    a: Ldba,
    hp: Hyperparams,
    rng: np.random.Generator,
    *,
    seed: int = 0,
    evaluate: bool = True,
) -> TrainResult:
    rs = hp.reward
    q = QTable(optimistic_init=2 * rs.U)
    result = TrainResult(q=q, seed=seed)
    actions_at: dict[tuple[int, int], tuple[ProductAction, ...]] = {}

    def actions(st: ProductState) -> tuple[ProductAction, ...]:
        key = (st.s, st.q)
        acts = actions_at.get(key)
        if acts is None:
            acts = actions_at[key] = available_actions(m, a, st)
        return acts

    start = time.perf_counter()
    steps = 0
    for episode in range(hp.episodes):
        st = initial_state(m, a)
        for _ in range(hp.max_steps):
            key = (st.s, st.q)
            act = epsilon_greedy(q, key, actions(st), hp.epsilon, rng)
            if act.kind == ENV:
                s_next = sample_transition(m, st.s, act.index, rng)
                move = automaton_move(a, rs, st.q, st.n, m.label(st.s))
                nxt = ProductState(s_next, move.q, move.n)
            else:
                s_next = st.s
                move = automaton_move(a, rs, act.index, st.n, None, epsilon=True)
                nxt = ProductState(st.s, move.q, move.n)

            if hp.counterfactual:
                for t in counterfactual_transitions(m, a, rs, st, act, s_next):
                    q_update(
                        q,
                        (t.source.s, t.source.q),
                        act,
                        t.reward,
                        t.discount,
                        (t.target.s, t.target.q),
                        actions(t.target),
                        hp.alpha,
                    )
            else:
                q_update(
                    q,
                    key,
                    act,
                    move.reward,
                    move.discount,
                    (nxt.s, nxt.q),
                    actions(nxt),
                    hp.alpha,
                )
            st = nxt
            steps += 1
            if evaluate and steps % hp.eval_interval == 0:
                value = evaluate_greedy(q, m, a)
                result.curve.append((steps, value))
                logger.info("step %d: satisfaction %.4f", steps, value)
        logger.debug("episode %d finished at (%d, %d, %d)", episode, *st)
    result.steps = steps
    result.wallclock = time.perf_counter() - start
    return result


def train_kc(
    m: LabeledMdp,
    a: Ldba,
    hp: Hyperparams,
    rng: np.random.Generator,
    *,
    seed: int = 0,
    evaluate: bool = True,
) -> TrainResult:
    hp = hp.model_copy(update={"counterfactual": False})
    return train(m, a, hp, rng, seed=seed, evaluate=evaluate)


def train_cf_kc(
    m: LabeledMdp,
    a: Ldba,
    hp: Hyperparams,
    rng: np.random.Generator,
    *,
    seed: int = 0,
    evaluate: bool = True,
) -> TrainResult:
    hp = hp.model_copy(update={"counterfactual": True})
    return train(m, a, hp, rng, seed=seed, evaluate=evaluate)


def final_satisfaction(result: TrainResult, m: LabeledMdp, a: Ldba) -> float:
    if result.curve:
        return result.curve[-1][1]
    return evaluate_greedy(result.q, m, a)

