import logging
from collections import deque
from collections.abc import Mapping
from typing import Optional

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import spsolve

from buchi_rl.config import get_settings
from buchi_rl.errors import (
    NonContractiveError,
    PolicyCoverageError,
    SingularSystemError,
    StateCapExceededError,
    UnavailableActionError,
)
from buchi_rl.graph import bottom_components, strongly_connected_components
from buchi_rl.mc.models import BsccDecomposition, Dtmc, Row, StateValues
from buchi_rl.product.models import ProductAction, ProductMdp, ProductState
from buchi_rl.product.transitions import initial_state, product_successors

logger = logging.getLogger(__name__)

Policy = Mapping[tuple[int, int], ProductAction]


def induce_dtmc(product: ProductMdp, policy: Policy) -> Dtmc:
    """Markov chain of `policy` on the product, reachable fragment in BFS order.

    `product` is anything with `mdp`, `automaton` and `rewards`; the policy is
    keyed on (s, q) and therefore ignores the counter.
    """
    m, a, rs = product.mdp, product.automaton, product.rewards
    cap = get_settings().STATE_CAP
    start = initial_state(m, a)
    index: dict[ProductState, int] = {start: 0}
    states = [start]
    rows: list[list[Row]] = []
    queue = deque([start])
    while queue:
        st = queue.popleft()
        try:
            act = policy[(st.s, st.q)]
        except KeyError:
            raise PolicyCoverageError(
                f"policy is undefined at reachable state {tuple(st)}"
            ) from None
        try:
            transitions = product_successors(m, a, rs, st, act)
        except UnavailableActionError as exc:
            raise PolicyCoverageError(
                f"policy picks an unavailable action at {tuple(st)}: {exc.detail}"
            ) from exc
        row = []
        for t in transitions:
            j = index.get(t.target)
            if j is None:
                if len(states) >= cap:
                    raise StateCapExceededError(
                        f"induced chain exceeds the state cap of {cap}"
                    )
                j = index[t.target] = len(states)
                states.append(t.target)
                queue.append(t.target)
            row.append(Row(j, t.probability, t.reward, t.discount))
        rows.append(row)
    return Dtmc.from_rows(
        rows,
        accepting=[a.is_accepting(st.q) for st in states],
        init=0,
        labels=[m.label(st.s) for st in states],
        states=states,
    )


def bsccs(d: Dtmc) -> BsccDecomposition:
    components = bottom_components(d.successors())
    in_bscc = np.zeros(d.n, dtype=bool)
    for c in components:
        in_bscc[c] = True
    decomposition = BsccDecomposition(
        components=components,
        accepting=[bool(d.accepting[c].any()) for c in components],
        transient=np.flatnonzero(~in_bscc).tolist(),
    )
    logger.debug(
        "%d BSCCs (%d accepting), %d transient states",
        len(components),
        sum(decomposition.accepting),
        len(decomposition.transient),
    )
    return decomposition


def _backward_reachable(d: Dtmc, targets: np.ndarray) -> np.ndarray:
    """Mask of states with a path into the `targets` mask."""
    predecessors: list[list[int]] = [[] for _ in range(d.n)]
    for src, dst in zip(d.sources().tolist(), d.targets.tolist()):
        predecessors[dst].append(src)
    seen = targets.copy()
    queue = deque(np.flatnonzero(targets).tolist())
    while queue:
        v = queue.popleft()
        for u in predecessors[v]:
            if not seen[u]:
                seen[u] = True
                queue.append(u)
    return seen


def _solve(
    M: sparse.csr_matrix, b: np.ndarray, error: type[Exception], what: str
) -> np.ndarray:
    """Solve x = M x + b for a substochastic M."""
    settings = get_settings()
    n = M.shape[0]
    if n == 0:
        return np.zeros(0)
    if n <= settings.DIRECT_SOLVER_LIMIT:
        logger.debug("direct sparse solve for %s over %d states", what, n)
        A = (sparse.identity(n, format="csc") - M.tocsc()).tocsc()
        x = np.atleast_1d(spsolve(A, b))
        if not np.all(np.isfinite(x)):
            raise error(f"{what}: linear system is singular")
        return x
    logger.debug("iterative solve for %s over %d states", what, n)
    x = np.zeros(n)
    for _ in range(settings.MAX_ITERATIONS):
        x_next = M @ x + b
        if np.max(np.abs(x_next - x)) <= settings.SOLVER_TOLERANCE:
            return x_next
        x = x_next
    raise error(f"{what}: no convergence after {settings.MAX_ITERATIONS} iterations")


def buchi_probability(
    d: Dtmc, decomposition: Optional[BsccDecomposition] = None
) -> StateValues:
    """Probability of visiting accepting states infinitely often, per state."""
    decomposition = decomposition or bsccs(d)
    x = np.zeros(d.n)
    good = np.zeros(d.n, dtype=bool)
    good[decomposition.accepting_states()] = True
    x[good] = 1.0
    # transient states that can still reach an accepting BSCC
    unknown = _backward_reachable(d, good) & ~good
    unknown[decomposition.rejecting_states()] = False
    idx = np.flatnonzero(unknown)
    if len(idx):
        P = d.matrix()
        M = P[idx][:, idx]
        b = np.asarray(P[idx][:, np.flatnonzero(good)].sum(axis=1)).ravel()
        x[idx] = np.clip(_solve(M, b, SingularSystemError, "reachability"), 0.0, 1.0)
    return StateValues(x, float(x[d.init]))


def _check_contractive(d: Dtmc, live: np.ndarray) -> None:
    sources = d.sources()
    undiscounted = (d.discounts >= 1.0) & live[sources] & live[d.targets]
    succ: list[list[int]] = [[] for _ in range(d.n)]
    rewarded = set()
    for e in np.flatnonzero(undiscounted).tolist():
        succ[sources[e]].append(int(d.targets[e]))
        if d.rewards[e] > 0:
            rewarded.add((int(sources[e]), int(d.targets[e])))
    for component in strongly_connected_components(succ):
        members = set(component)
        for u, v in rewarded:
            if u in members and v in members:
                raise NonContractiveError(
                    f"undiscounted cycle through rewarded edge {u} -> {v}"
                )


def expected_discounted_reward(d: Dtmc) -> StateValues:
    """Solve V(s) = Σ P(s,s')·[r(s,s') + γ(s,s')·V(s')] on every state."""
    rewarded_sources = np.zeros(d.n, dtype=bool)
    rewarded_sources[d.sources()[d.rewards > 0]] = True
    live = _backward_reachable(d, rewarded_sources)
    _check_contractive(d, live)
    V = np.zeros(d.n)
    idx = np.flatnonzero(live)
    if len(idx):
        M = d.matrix(d.probs * d.discounts)[idx][:, idx]
        b = np.asarray(d.matrix(d.probs * d.rewards)[idx].sum(axis=1)).ravel()
        V[idx] = _solve(M, b, NonContractiveError, "discounted reward")
    return StateValues(V, float(V[d.init]))
