import math

from pydantic import BaseModel, Field, model_validator

from buchi_rl.errors import ConfigError


class RewardStructure(BaseModel):
    """Counter-graded rewards R_0..R_K, their bound U and the base discount."""

    K: int = Field(ge=0)
    U: float = Field(gt=0, le=1)
    rewards: tuple[float, ...]
    gamma: float = Field(default=0.99, gt=0, le=1)

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def check_rewards(self) -> "RewardStructure":
        if len(self.rewards) != self.K + 1:
            raise ValueError(
                f"expected {self.K + 1} reward levels, got {len(self.rewards)}"
            )
        if any(
            r < 0 or (r > self.U and not math.isclose(r, self.U, rel_tol=1e-12))
            for r in self.rewards
        ):
            raise ValueError(f"rewards must lie in [0, {self.U}]")
        return self

    @property
    def strictly_positive(self) -> bool:
        return all(r > 0 for r in self.rewards)

    def reward(self, n: int) -> float:
        return self.rewards[n]

    def discount(self, reward: float) -> float:
        return 1.0 - reward if reward > 0 else self.gamma


def linear_reward(K: int, U: float, gamma: float = 0.99) -> RewardStructure:
    """R_n = U·n/K; R_0 is zero."""
    if K < 1:
        raise ConfigError("linear reward schedule needs K >= 1; use constant_reward")
    rewards = [0.0] + [U * (n / K) for n in range(1, K)] + [U]
    return RewardStructure(K=K, U=U, gamma=gamma, rewards=tuple(rewards))


def strictly_positive_linear_reward(
    K: int, U: float, gamma: float = 0.99
) -> RewardStructure:
    """R_n = U·(n+1)/(K+1), so every level lies in (0, U]."""
    rewards = [U * ((n + 1) / (K + 1)) for n in range(K)] + [U]
    return RewardStructure(K=K, U=U, gamma=gamma, rewards=tuple(rewards))


def constant_reward(U: float, gamma: float = 0.99) -> RewardStructure:
    return RewardStructure(K=0, U=U, gamma=gamma, rewards=(U,))
