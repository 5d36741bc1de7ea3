from collections.abc import Hashable, Sequence
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np
from scipy import sparse

from buchi_rl.ltl.models import EMPTY_LETTER, Letter

ROW_TOLERANCE = 1e-12


class Row(NamedTuple):
    target: int
    probability: float
    reward: float = 0.0
    discount: float = 1.0


@dataclass(frozen=True, eq=False)
class Dtmc:
    """Discrete-time Markov chain in compressed row form.

    Row i spans `indptr[i]:indptr[i+1]` of the edge arrays; every edge carries
    its probability, reward and discount.
    """

    init: int
    indptr: np.ndarray
    targets: np.ndarray
    probs: np.ndarray
    rewards: np.ndarray
    discounts: np.ndarray
    accepting: np.ndarray
    labels: tuple[Letter, ...]
    states: Optional[tuple[Hashable, ...]] = None
    _matrix: dict = field(default_factory=dict, repr=False)

    @classmethod
    def from_rows(
        cls,
        rows: Sequence[Sequence[Row]],
        accepting: Sequence[bool],
        init: int = 0,
        labels: Optional[Sequence[Letter]] = None,
        states: Optional[Sequence[Hashable]] = None,
    ) -> "Dtmc":
        n = len(rows)
        if not 0 <= init < n:
            raise ValueError(f"initial state {init} out of range")
        if len(accepting) != n:
            raise ValueError("accepting marks must cover every state")
        for i, row in enumerate(rows):
            if not row:
                raise ValueError(f"state {i} has no successor")
            total = sum(r.probability for r in row)
            if abs(total - 1.0) > ROW_TOLERANCE:
                raise ValueError(f"row {i} sums to {total}, expected 1")
            if any(not 0 <= r.target < n for r in row):
                raise ValueError(f"row {i} has a successor out of range")
        edges = [r for row in rows for r in row]
        indptr = np.zeros(n + 1, dtype=np.int64)
        indptr[1:] = np.cumsum([len(row) for row in rows])
        return cls(
            init=init,
            indptr=indptr,
            targets=np.array([r.target for r in edges], dtype=np.int64),
            probs=np.array([r.probability for r in edges], dtype=float),
            rewards=np.array([r.reward for r in edges], dtype=float),
            discounts=np.array([r.discount for r in edges], dtype=float),
            accepting=np.array(accepting, dtype=bool),
            labels=tuple(labels) if labels is not None else (EMPTY_LETTER,) * n,
            states=tuple(states) if states is not None else None,
        )

    @property
    def n(self) -> int:
        return len(self.indptr) - 1

    def __len__(self) -> int:
        return self.n

    def row(self, i: int) -> list[Row]:
        lo, hi = self.indptr[i], self.indptr[i + 1]
        return [
            Row(int(t), float(p), float(r), float(d))
            for t, p, r, d in zip(
                self.targets[lo:hi],
                self.probs[lo:hi],
                self.rewards[lo:hi],
                self.discounts[lo:hi],
            )
        ]

    def successors(self) -> list[list[int]]:
        return [
            self.targets[self.indptr[i] : self.indptr[i + 1]].tolist()
            for i in range(self.n)
        ]

    def sources(self) -> np.ndarray:
        """Source state of every edge."""
        return np.repeat(np.arange(self.n), np.diff(self.indptr))

    def matrix(self, weights: Optional[np.ndarray] = None) -> sparse.csr_matrix:
        """Transition matrix, or the edge-weighted matrix when `weights` is given."""
        if weights is None:
            cached = self._matrix.get("P")
            if cached is None:
                cached = self._matrix["P"] = sparse.csr_matrix(
                    (self.probs, self.targets, self.indptr), shape=(self.n, self.n)
                )
            return cached
        return sparse.csr_matrix(
            (weights, self.targets, self.indptr), shape=(self.n, self.n)
        )

    def p_min(self) -> float:
        return float(self.probs[self.probs > 0].min())


@dataclass(frozen=True)
class BsccDecomposition:
    components: list[list[int]]
    accepting: list[bool]
    transient: list[int]

    def accepting_states(self) -> list[int]:
        return sorted(
            s for c, acc in zip(self.components, self.accepting) if acc for s in c
        )

    def rejecting_states(self) -> list[int]:
        return sorted(
            s for c, acc in zip(self.components, self.accepting) if not acc for s in c
        )


class StateValues(NamedTuple):
    values: np.ndarray
    initial: float
