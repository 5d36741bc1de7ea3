from buchi_rl.ltl import models, parser, semantics
from buchi_rl.ltl.models import LassoWord, Letter, LtlFormula, atoms, letter
from buchi_rl.ltl.parser import format_ltl, parse_ltl
from buchi_rl.ltl.semantics import lasso_satisfies, random_lasso, shift

__all__ = [
    "models",
    "parser",
    "semantics",
    "LassoWord",
    "Letter",
    "LtlFormula",
    "atoms",
    "letter",
    "format_ltl",
    "parse_ltl",
    "lasso_satisfies",
    "random_lasso",
    "shift",
]
