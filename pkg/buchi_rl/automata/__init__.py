from buchi_rl.automata import acceptance, bundled, io, models, schemas, validate
from buchi_rl.automata.acceptance import epsilon_successors, ldba_accepts_lasso
from buchi_rl.automata.bundled import (
    BUNDLED_AUTOMATA,
    bundled_formula,
    load_automaton,
)
from buchi_rl.automata.io import load_ldba, read_ldba, save_ldba
from buchi_rl.automata.models import TRAP, Ldba
from buchi_rl.automata.validate import validate_ldba

__all__ = [
    "acceptance",
    "bundled",
    "io",
    "models",
    "schemas",
    "validate",
    "epsilon_successors",
    "ldba_accepts_lasso",
    "BUNDLED_AUTOMATA",
    "bundled_formula",
    "load_automaton",
    "load_ldba",
    "read_ldba",
    "save_ldba",
    "TRAP",
    "Ldba",
    "validate_ldba",
]
