import logging
from collections import deque
from typing import Optional

from buchi_rl.automata.models import Ldba
from buchi_rl.config import get_settings
from buchi_rl.envs.models import LabeledMdp
from buchi_rl.errors import StateCapExceededError
from buchi_rl.product.models import Edge, ExplicitProduct
from buchi_rl.product.schemas import RewardStructure
from buchi_rl.product.transitions import (
    available_actions,
    initial_state,
    product_successors,
)

logger = logging.getLogger(__name__)


def enumerate_product(
    m: LabeledMdp,
    a: Ldba,
    rs: RewardStructure,
    cap: Optional[int] = None,
) -> ExplicitProduct:
    """Breadth-first enumeration of the product reachable from (s₀, q₀, 0)."""
    cap = get_settings().STATE_CAP if cap is None else cap
    product = ExplicitProduct(mdp=m, automaton=a, rewards=rs)

    def intern(st) -> int:
        i = product.index.get(st)
        if i is None:
            if len(product.states) >= cap:
                raise StateCapExceededError(
                    f"product of {m.name} exceeds the state cap of {cap}"
                )
            i = len(product.states)
            product.index[st] = i
            product.states.append(st)
            queue.append(i)
        return i

    queue: deque[int] = deque()
    intern(initial_state(m, a))
    while queue:
        i = queue.popleft()
        st = product.states[i]
        acts = available_actions(m, a, st)
        product.actions.append(acts)
        for act in acts:
            product.edges[(i, act)] = tuple(
                Edge(intern(t.target), t.probability, t.reward, t.discount)
                for t in product_successors(m, a, rs, st, act)
            )
    logger.info(
        "product %s x %d-state automaton (K=%d): %d states",
        m.name,
        a.n_states,
        rs.K,
        len(product),
    )
    return product
