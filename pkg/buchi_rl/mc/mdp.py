"""Optimal Büchi satisfaction on an explicit product MDP.

Maximal end components are found by repeatedly splitting SCCs and dropping
actions that can leave their component. Accepting MECs are won with
probability 1; the optimum is the maximal probability of reaching them.
"""

import logging

import numpy as np
from scipy import sparse

from buchi_rl.automata.models import Ldba
from buchi_rl.config import get_settings
from buchi_rl.envs.models import LabeledMdp
from buchi_rl.graph import strongly_connected_components
from buchi_rl.mc.models import StateValues
from buchi_rl.product.explicit import enumerate_product
from buchi_rl.product.models import ExplicitProduct
from buchi_rl.product.schemas import constant_reward

logger = logging.getLogger(__name__)


def maximal_end_components(product: ExplicitProduct) -> list[list[int]]:
    n = len(product)
    actions = [list(product.actions[i]) for i in range(n)]
    alive = np.ones(n, dtype=bool)
    changed = True
    while changed:
        changed = False
        successors = [
            sorted({e.target for act in actions[i] for e in product.edges[(i, act)]})
            if alive[i]
            else []
            for i in range(n)
        ]
        component = np.full(n, -1, dtype=np.int64)
        for k, members in enumerate(strongly_connected_components(successors)):
            component[members] = k
        for i in np.flatnonzero(alive).tolist():
            kept = [
                act
                for act in actions[i]
                if all(
                    alive[e.target] and component[e.target] == component[i]
                    for e in product.edges[(i, act)]
                )
            ]
            if len(kept) != len(actions[i]):
                actions[i] = kept
                changed = True
            if not kept:
                alive[i] = False
    successors = [
        sorted({e.target for act in actions[i] for e in product.edges[(i, act)]})
        if alive[i]
        else []
        for i in range(n)
    ]
    mecs = [
        sorted(c)
        for c in strongly_connected_components(successors)
        if alive[c[0]]
    ]
    logger.debug("%d maximal end components", len(mecs))
    return mecs


def _choice_matrix(product: ExplicitProduct) -> tuple[sparse.csr_matrix, np.ndarray]:
    """One row per (state, action) pair, rows grouped by state."""
    data, cols, indptr, starts = [], [], [0], []
    for i in range(len(product)):
        starts.append(len(indptr) - 1)
        for act in product.actions[i]:
            for e in product.edges[(i, act)]:
                cols.append(e.target)
                data.append(e.probability)
            indptr.append(len(cols))
    matrix = sparse.csr_matrix(
        (data, cols, indptr), shape=(len(indptr) - 1, len(product))
    )
    return matrix, np.array(starts, dtype=np.int64)


def max_buchi_values(product: ExplicitProduct) -> StateValues:
    """Per-state supremum over policies of the Büchi satisfaction probability."""
    settings = get_settings()
    n = len(product)
    target = np.zeros(n, dtype=bool)
    for mec in maximal_end_components(product):
        if any(product.is_accepting(i) for i in mec):
            target[mec] = True

    # states with no path to an accepting MEC keep probability 0
    predecessors: list[set[int]] = [set() for _ in range(n)]
    for (i, _), edges in product.edges.items():
        for e in edges:
            predecessors[e.target].add(i)
    reach = target.copy()
    stack = np.flatnonzero(target).tolist()
    while stack:
        v = stack.pop()
        for u in predecessors[v]:
            if not reach[u]:
                reach[u] = True
                stack.append(u)

    x = target.astype(float)
    if reach.any() and not target.all():
        matrix, starts = _choice_matrix(product)
        previous = np.inf
        for iteration in range(settings.MAX_ITERATIONS):
            x_next = np.maximum.reduceat(matrix @ x, starts)
            x_next[target] = 1.0
            x_next[~reach] = 0.0
            gap = float(np.max(np.abs(x_next - x)))
            x = x_next
            # geometric tail bound on the remaining error
            rate = gap / previous if previous > 0 else 0.0
            if gap == 0.0 or (
                rate < 1.0 and gap / (1.0 - rate) <= settings.SOLVER_TOLERANCE
            ):
                break
            previous = gap
        else:
            logger.warning(
                "value iteration stopped after %d iterations", settings.MAX_ITERATIONS
            )
        logger.debug("value iteration finished after %d sweeps", iteration + 1)
    return StateValues(x, float(x[product.init]))


def mdp_max_buchi_probability(product: ExplicitProduct) -> float:
    return max_buchi_values(product).initial


def optimal_satisfaction(m: LabeledMdp, a: Ldba) -> float:
    """Optimum over all policies; the counter plays no role so K=0 suffices."""
    product = enumerate_product(m, a, constant_reward(1.0))
    value = mdp_max_buchi_probability(product)
    logger.info("optimal satisfaction for %s: %.6f", m.name, value)
    return value
