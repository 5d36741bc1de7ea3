from pydantic import BaseModel, ConfigDict, Field


class TransitionRecord(BaseModel):
    model_config = ConfigDict(populate_by_name=True, frozen=True)

    source: int = Field(alias="from")
    target: int = Field(alias="to")
    p: float
    reward: float = 0.0
    discount: float = 1.0
