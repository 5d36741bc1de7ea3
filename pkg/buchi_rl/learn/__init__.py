from buchi_rl.learn.hyper import suggest_hyperparameters
from buchi_rl.learn.qtable import (
    GreedyPolicy,
    QTable,
    epsilon_greedy,
    extract_policy,
    q_update,
)
from buchi_rl.learn.schemas import Hyperparams, TrainResult
from buchi_rl.learn.train import (
    counterfactual_transitions,
    evaluate_greedy,
    final_satisfaction,
    train,
    train_cf_kc,
    train_kc,
)

__all__ = [
    "suggest_hyperparameters",
    "GreedyPolicy",
    "QTable",
    "epsilon_greedy",
    "extract_policy",
    "q_update",
    "Hyperparams",
    "TrainResult",
    "counterfactual_transitions",
    "evaluate_greedy",
    "final_satisfaction",
    "train",
    "train_cf_kc",
    "train_kc",
]
