import hashlib
from typing import Annotated, Literal, Optional

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationError,
    field_validator,
    model_validator,
)

from buchi_rl.errors import ConfigError
from buchi_rl.learn.schemas import Hyperparams
from buchi_rl.product.models import ProductAction
from buchi_rl.product.schemas import (
    RewardStructure,
    constant_reward,
    linear_reward,
    strictly_positive_linear_reward,
)

Algorithm = Literal["KC", "CF", "CF_KC"]
RewardSchedule = Literal["linear", "constant", "strictly_positive_linear"]
UnitFloat = Annotated[float, Field(gt=0, le=1)]

# no learned policy may beat the model-checked optimum by more than this
OPTIMAL_SLACK = 1e-8


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    env: str = "prob_gate"
    automaton: str = "fga_gnc"
    K: int = Field(default=10, ge=0)
    U: float = Field(default=0.1, gt=0, le=1)
    gamma: float = Field(default=0.99, gt=0, le=1)
    alpha: float = Field(default=0.1, gt=0, le=1)
    epsilon: float = Field(default=0.1, gt=0, le=1)
    episodes: int = Field(default=40_000, ge=0)
    max_steps: int = Field(default=100, ge=1)
    eval_interval: int = Field(default=10_000, ge=1)
    algorithm: Algorithm = "KC"
    seeds: list[int] = Field(default_factory=lambda: list(range(10)), min_length=1)
    reward_schedule: RewardSchedule = "linear"
    output_dir: str = "results"

    # used by individual commands
    formula: Optional[str] = None
    samples: int = Field(default=1000, ge=0)
    policy: Optional[str] = None
    master_seed: int = 0
    workers: Optional[int] = Field(default=None, ge=1)
    sweep_u: list[UnitFloat] = Field(default_factory=lambda: [0.01, 0.1, 0.5])
    sweep_gamma: list[UnitFloat] = Field(default_factory=lambda: [0.9, 0.99, 0.995])
    sweep_k: list[Annotated[int, Field(ge=0)]] = Field(default_factory=lambda: [5, 10, 20])
    threshold_fraction: float = Field(default=0.9, gt=0, le=1)

    @field_validator("seeds")
    @classmethod
    def unique_seeds(cls, seeds: list[int]) -> list[int]:
        if len(set(seeds)) != len(seeds):
            raise ValueError("seeds must be distinct")
        return seeds

    @model_validator(mode="after")
    def check_counter(self) -> "ExperimentConfig":
        if self.uses_linear_schedule and self.K < 1:
            raise ValueError("the linear reward schedule needs K >= 1")
        return self

    @property
    def uses_linear_schedule(self) -> bool:
        return self.algorithm != "CF" and self.reward_schedule == "linear"

    def reward_structure(self) -> RewardStructure:
        try:
            if self.algorithm == "CF" or self.reward_schedule == "constant":
                return constant_reward(self.U, self.gamma)
            if self.reward_schedule == "strictly_positive_linear":
                return strictly_positive_linear_reward(self.K, self.U, self.gamma)
            return linear_reward(self.K, self.U, self.gamma)
        except ValidationError as exc:
            raise ConfigError(f"invalid reward structure: {exc.errors()[0]['msg']}") from exc

    def hyperparams(self) -> Hyperparams:
        try:
            return Hyperparams(
                alpha=self.alpha,
                epsilon=self.epsilon,
                reward=self.reward_structure(),
                episodes=self.episodes,
                max_steps=self.max_steps,
                eval_interval=self.eval_interval,
                counterfactual=self.algorithm != "KC",
            )
        except ValidationError as exc:
            raise ConfigError(f"invalid hyperparameters: {exc.errors()[0]['msg']}") from exc

    def config_hash(self) -> str:
        return hashlib.sha256(self.model_dump_json().encode()).hexdigest()[:12]


class RunRecord(BaseModel):
    config_hash: str
    seed: int
    algorithm: Algorithm
    curve: list[tuple[int, float]]
    final_satisfaction: float = Field(ge=0, le=1)
    optimal: float = Field(ge=0, le=1)
    wallclock: float = Field(ge=0)
    steps: int = 0
    steps_to_threshold: Optional[int] = None

    @field_validator("curve")
    @classmethod
    def check_curve(cls, curve: list[tuple[int, float]]) -> list[tuple[int, float]]:
        steps = [step for step, _ in curve]
        if steps != sorted(steps):
            raise ValueError("curve steps must be increasing")
        if any(not 0 <= p <= 1 for _, p in curve):
            raise ValueError("satisfaction probabilities must lie in [0, 1]")
        return curve

    @model_validator(mode="after")
    def check_below_optimal(self) -> "RunRecord":
        if self.final_satisfaction > self.optimal + OPTIMAL_SLACK:
            raise ValueError(
                f"final satisfaction {self.final_satisfaction} exceeds "
                f"the optimum {self.optimal}"
            )
        return self


class ActionRef(BaseModel):
    kind: Literal["env", "eps"]
    index: int

    def to_action(self) -> ProductAction:
        return ProductAction(self.kind, self.index)


class PolicyEntry(BaseModel):
    s: int
    q: int
    action: ActionRef


class PolicyFile(BaseModel):
    env: str
    automaton: str
    entries: list[PolicyEntry]

    @classmethod
    def from_policy(
        cls, env: str, automaton: str, policy: dict[tuple[int, int], ProductAction]
    ) -> "PolicyFile":
        return cls(
            env=env,
            automaton=automaton,
            entries=[
                PolicyEntry(s=s, q=q, action=ActionRef(kind=act.kind, index=act.index))
                for (s, q), act in sorted(policy.items())
            ],
        )

    def to_policy(self) -> dict[tuple[int, int], ProductAction]:
        return {(e.s, e.q): e.action.to_action() for e in self.entries}
