from collections.abc import Iterator
from dataclasses import dataclass, field
from itertools import combinations

from buchi_rl.ltl.models import Letter

# Implicit rejecting state reached when a letter has no successor.
TRAP = -1


@dataclass(frozen=True, eq=True)
class Ldba:
    """Limit-deterministic Büchi automaton with explicit letter edges.

    States are 0..n_states-1; the deterministic component is the complement of
    `nondet`. Missing (state, letter) entries denote the empty successor set.
    """

    ap: tuple[str, ...]
    n_states: int
    initial: int
    nondet: frozenset[int]
    accepting: frozenset[int]
    letter_transitions: dict[tuple[int, Letter], frozenset[int]] = field(
        default_factory=dict
    )
    epsilon_transitions: dict[int, frozenset[int]] = field(default_factory=dict)

    @property
    def states(self) -> range:
        return range(self.n_states)

    @property
    def det_states(self) -> frozenset[int]:
        return frozenset(self.states) - self.nondet

    def project(self, label: Letter) -> Letter:
        """Restrict an environment label to this automaton's alphabet."""
        return frozenset(label) & frozenset(self.ap)

    def successors(self, q: int, label: Letter) -> frozenset[int]:
        if q == TRAP:
            return frozenset()
        return self.letter_transitions.get((q, self.project(label)), frozenset())

    def step(self, q: int, label: Letter) -> int:
        """Deterministic letter move used by the product; TRAP when empty."""
        succ = self.successors(q, label)
        if not succ:
            return TRAP
        return min(succ)

    def eps(self, q: int) -> frozenset[int]:
        if q == TRAP:
            return frozenset()
        return self.epsilon_transitions.get(q, frozenset())

    def letters(self) -> Iterator[Letter]:
        """All letters over `ap`, smallest subsets first."""
        for size in range(len(self.ap) + 1):
            for combo in combinations(self.ap, size):
                yield frozenset(combo)

    def is_accepting(self, q: int) -> bool:
        return q in self.accepting
