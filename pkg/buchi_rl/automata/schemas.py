from typing import Optional

from pydantic import BaseModel, computed_field


class Violation(BaseModel):
    rule: str
    state: Optional[int] = None
    letter: Optional[list[str]] = None
    message: str

    model_config = {"frozen": True}


class ValidationReport(BaseModel):
    violations: list[Violation] = []
    warnings: list[Violation] = []

    @computed_field
    @property
    def ok(self) -> bool:
        return not self.violations

    def rules(self) -> set[str]:
        return {v.rule for v in self.violations}
