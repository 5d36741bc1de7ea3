"""Bracket on the expected discounted reward in terms of the satisfaction
probability, and the hyperparameter choice that makes it tight."""

from typing import NamedTuple

from buchi_rl.mc.models import Dtmc


class LooseConstants(NamedTuple):
    C: float
    N: int


def loose_constants(d: Dtmc) -> LooseConstants:
    """Valid (if loose) constants: C = |S×| / p_min and N = |S×|."""
    return LooseConstants(C=d.n / d.p_min(), N=d.n)


def discounted_reward_bounds(
    P: float, U: float, gamma: float, C: float, N: float
) -> tuple[float, float]:
    lower = gamma ** (C + N / U) * P
    upper = 1.0 - (1.0 - U) ** C + P * (1.0 - U) ** C
    return lower, upper


def tight_hyperparameters(C_empty: float, C_acc: float, N: float) -> tuple[float, float]:
    """(U, γ) = (1/C∅, 1 − 1/(C∅·N + C_ℱ))."""
    return 1.0 / C_empty, 1.0 - 1.0 / (C_empty * N + C_acc)
