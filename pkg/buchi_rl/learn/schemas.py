from dataclasses import dataclass, field

from pydantic import BaseModel, Field

from buchi_rl.learn.qtable import QTable
from buchi_rl.product.schemas import RewardStructure


class Hyperparams(BaseModel):
    model_config = {"frozen": True}

    alpha: float = Field(default=0.1, gt=0, le=1)
    epsilon: float = Field(default=0.1, gt=0, le=1)
    reward: RewardStructure
    episodes: int = Field(default=1000, ge=0)
    max_steps: int = Field(default=100, ge=1)
    eval_interval: int = Field(default=10_000, ge=1)
    counterfactual: bool = False

    @property
    def gamma(self) -> float:
        return self.reward.gamma


@dataclass
class TrainResult:
    q: QTable
    curve: list[tuple[int, float]] = field(default_factory=list)
    seed: int = 0
    wallclock: float = 0.0
    steps: int = 0
