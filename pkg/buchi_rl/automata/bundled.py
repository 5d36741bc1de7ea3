from importlib import resources
from pathlib import Path

from buchi_rl.automata.io import load_ldba, read_ldba
from buchi_rl.automata.models import Ldba
from buchi_rl.errors import ConfigError

# name -> (file, source formula)
BUNDLED_AUTOMATA: dict[str, tuple[str, str]] = {
    "fga_gnc": ("fga_gnc.ldba", "F G a & G !c"),
    "frozen_lake": ("frozen_lake.ldba", "(G F a | G F b) & G !h"),
    "office_world": (
        "office_world.ldba",
        "((G F a & G F b) | (F l & X (G F t & G F w))) & G !o",
    ),
}


def bundled_text(name: str) -> str:
    filename, _ = BUNDLED_AUTOMATA[name]
    return (
        resources.files("buchi_rl.data")
        .joinpath("automata", filename)
        .read_text(encoding="utf-8")
    )


def bundled_formula(name: str) -> str:
    return BUNDLED_AUTOMATA[name][1]


def load_automaton(name_or_path: str) -> Ldba:
    """Load a bundled automaton by name, or an LDBA file by path."""
    if name_or_path in BUNDLED_AUTOMATA:
        return load_ldba(bundled_text(name_or_path))
    path = Path(name_or_path)
    if not path.is_file():
        raise ConfigError(
            f"no automaton file {name_or_path!r}; bundled automata are "
            f"{sorted(BUNDLED_AUTOMATA)}"
        )
    return read_ldba(path)
