from importlib import resources
from pathlib import Path
from typing import Callable

from buchi_rl.envs.grid import compile_grid, load_grid, read_grid
from buchi_rl.envs.models import LabeledMdp
from buchi_rl.envs.schemas import CellSpec, GridSpec

GATE_DOWN = 0.2
GATE_RIGHT = 0.8


def bundled_grid_text(filename: str) -> str:
    return (
        resources.files("buchi_rl.data")
        .joinpath("grids", filename)
        .read_text(encoding="utf-8")
    )


def probabilistic_gate() -> LabeledMdp:
    """Gate benchmark: a tempting `a` corridor on top that ends in a dead
    sink, and a gate below whose right branch leads to the `a` sink and
    whose down branch drops into the `c` sink."""
    legend = {
        ".": CellSpec(),
        "#": CellSpec(wall=True),
        "S": CellSpec(start=True),
        ">": CellSpec(oneway="right", labels=frozenset({"a"})),
        "x": CellSpec(sink=True),
        "A": CellSpec(sink=True, labels=frozenset({"a"})),
        "g": CellSpec(gate=(GATE_DOWN, GATE_RIGHT)),
        "C": CellSpec(sink=True, labels=frozenset({"c"})),
    }
    cells = [
        ">" * 9 + "x",
        "S" + "#" * 9,
        "g" + "." * 8 + "A",
        "C" + "#" * 9,
    ]
    spec = GridSpec(name="prob_gate", rows=4, cols=10, legend=legend, cells=cells)
    return compile_grid(spec)


def frozen_lake8() -> LabeledMdp:
    return load_grid(bundled_grid_text("frozen_lake8.grid"), name="frozen_lake8")


def office_world() -> LabeledMdp:
    return load_grid(bundled_grid_text("office.grid"), name="office")


BUILTIN_ENVIRONMENTS: dict[str, Callable[[], LabeledMdp]] = {
    "prob_gate": probabilistic_gate,
    "frozen_lake8": frozen_lake8,
    "office": office_world,
}


def load_environment(name_or_path: str) -> LabeledMdp:
    """Build a builtin environment by name, or compile a grid file."""
    if name_or_path in BUILTIN_ENVIRONMENTS:
        return BUILTIN_ENVIRONMENTS[name_or_path]()
    return read_grid(Path(name_or_path))
