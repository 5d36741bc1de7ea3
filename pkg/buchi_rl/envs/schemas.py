from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator

Direction = Literal["up", "down", "left", "right"]


class CellSpec(BaseModel):
    """Behaviour of one legend glyph; kinds combine with '+' in grid files."""

    wall: bool = False
    start: bool = False
    ice: bool = False
    hole: bool = False
    sink: bool = False
    labels: frozenset[str] = frozenset()
    oneway: Optional[Direction] = None
    gate: Optional[tuple[float, float]] = None  # (p_down, p_right)

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def check_consistent(self) -> "CellSpec":
        if self.wall and (self.start or self.labels or self.gate or self.oneway):
            raise ValueError("a wall cell cannot carry other kinds")
        if self.gate is not None:
            p_down, p_right = self.gate
            if p_down < 0 or p_right < 0 or abs(p_down + p_right - 1.0) > 1e-12:
                raise ValueError(
                    f"gate probabilities {p_down}, {p_right} do not sum to 1"
                )
        if (self.hole or self.sink) and (self.gate or self.oneway):
            raise ValueError("absorbing cells cannot be gates or one-way cells")
        return self

    @property
    def absorbing(self) -> bool:
        return self.hole or self.sink


class GridSpec(BaseModel):
    name: str = "grid"
    rows: int = Field(ge=1)
    cols: int = Field(ge=1)
    legend: dict[str, CellSpec]
    cells: list[str]

    @model_validator(mode="after")
    def check_block(self) -> "GridSpec":
        if len(self.cells) != self.rows:
            raise ValueError(f"expected {self.rows} grid rows, got {len(self.cells)}")
        starts = 0
        for r, row in enumerate(self.cells):
            if len(row) != self.cols:
                raise ValueError(
                    f"row {r} has {len(row)} cells, expected {self.cols}"
                )
            for c, glyph in enumerate(row):
                if glyph not in self.legend:
                    raise ValueError(f"glyph {glyph!r} at ({r},{c}) not in legend")
                starts += self.legend[glyph].start
        if starts != 1:
            raise ValueError(f"expected exactly one start cell, found {starts}")
        return self

    def cell(self, r: int, c: int) -> CellSpec:
        return self.legend[self.cells[r][c]]
