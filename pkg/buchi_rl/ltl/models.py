import re
from dataclasses import dataclass
from typing import TypeAlias

ATOM_PATTERN = re.compile(r"^[a-z][a-z0-9_]*$")
RESERVED_NAMES = frozenset({"true", "false"})

# A letter is the set of atomic propositions holding at one path position.
Letter: TypeAlias = frozenset[str]
EMPTY_LETTER: Letter = frozenset()


def is_atom_name(name: str) -> bool:
    return bool(ATOM_PATTERN.match(name)) and name not in RESERVED_NAMES


def letter(*atoms: str) -> Letter:
    return frozenset(atoms)


@dataclass(frozen=True)
class TrueConst:
    pass


@dataclass(frozen=True)
class Atom:
    name: str

    def __post_init__(self) -> None:
        if not is_atom_name(self.name):
            raise ValueError(f"invalid atomic proposition {self.name!r}")


@dataclass(frozen=True)
class Not:
    operand: "LtlFormula"


@dataclass(frozen=True)
class Next:
    operand: "LtlFormula"


@dataclass(frozen=True)
class Eventually:
    operand: "LtlFormula"


@dataclass(frozen=True)
class Always:
    operand: "LtlFormula"


@dataclass(frozen=True)
class And:
    left: "LtlFormula"
    right: "LtlFormula"


@dataclass(frozen=True)
class Or:
    left: "LtlFormula"
    right: "LtlFormula"


@dataclass(frozen=True)
class Implies:
    left: "LtlFormula"
    right: "LtlFormula"


@dataclass(frozen=True)
class Until:
    left: "LtlFormula"
    right: "LtlFormula"


LtlFormula: TypeAlias = (
    TrueConst | Atom | Not | Next | Eventually | Always | And | Or | Implies | Until
)

UNARY_TYPES = (Not, Next, Eventually, Always)
BINARY_TYPES = (And, Or, Implies, Until)


def atoms(f: LtlFormula) -> frozenset[str]:
    """Atomic propositions mentioned in `f`."""
    if isinstance(f, Atom):
        return frozenset({f.name})
    if isinstance(f, UNARY_TYPES):
        return atoms(f.operand)
    if isinstance(f, BINARY_TYPES):
        return atoms(f.left) | atoms(f.right)
    return frozenset()


@dataclass(frozen=True)
class LassoWord:
    """The ultimately periodic word stem·loop^ω."""

    stem: tuple[Letter, ...]
    loop: tuple[Letter, ...]

    def __post_init__(self) -> None:
        if not self.loop:
            raise ValueError("lasso loop must contain at least one letter")
        object.__setattr__(self, "stem", tuple(frozenset(x) for x in self.stem))
        object.__setattr__(self, "loop", tuple(frozenset(x) for x in self.loop))

    def __len__(self) -> int:
        return len(self.stem) + len(self.loop)

    def position(self, i: int) -> Letter:
        return (self.stem + self.loop)[i]

    def successor(self, i: int) -> int:
        """Index of the position after `i` in the finite lasso graph."""
        return i + 1 if i + 1 < len(self) else len(self.stem)

    def unrolled(self) -> "LassoWord":
        return LassoWord(self.stem, self.loop + self.loop)

    def alphabet(self) -> frozenset[str]:
        out: set[str] = set()
        for x in self.stem + self.loop:
            out |= x
        return frozenset(out)
