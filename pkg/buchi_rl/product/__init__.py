from buchi_rl.product.explicit import enumerate_product
from buchi_rl.product.models import (
    ENV,
    EPS,
    Edge,
    ExplicitProduct,
    ProductAction,
    ProductMdp,
    ProductState,
    ProductTransition,
    env_action,
    eps_action,
)
from buchi_rl.product.schemas import (
    RewardStructure,
    constant_reward,
    linear_reward,
    strictly_positive_linear_reward,
)
from buchi_rl.product.transitions import (
    automaton_move,
    available_actions,
    initial_state,
    is_available,
    product_successors,
)

__all__ = [
    "enumerate_product",
    "ENV",
    "EPS",
    "Edge",
    "ExplicitProduct",
    "ProductAction",
    "ProductMdp",
    "ProductState",
    "ProductTransition",
    "env_action",
    "eps_action",
    "RewardStructure",
    "constant_reward",
    "linear_reward",
    "strictly_positive_linear_reward",
    "automaton_move",
    "available_actions",
    "initial_state",
    "is_available",
    "product_successors",
]
