import logging
from collections import deque

from buchi_rl.automata.models import Ldba
from buchi_rl.automata.schemas import ValidationReport, Violation
from buchi_rl.graph import strongly_connected_components

logger = logging.getLogger(__name__)


def _reachable(a: Ldba) -> set[int]:
    seen = {a.initial}
    queue = deque([a.initial])
    edges = {}
    for (q, _), succ in a.letter_transitions.items():
        edges.setdefault(q, set()).update(succ)
    while queue:
        q = queue.popleft()
        for nxt in edges.get(q, set()) | a.eps(q):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return seen


def _epsilon_cycles(a: Ldba, reachable: set[int]) -> list[list[int]]:
    succ = [
        sorted(a.eps(q) & reachable) if q in reachable else [] for q in a.states
    ]
    return [
        c
        for c in strongly_connected_components(succ, sorted(reachable))
        if len(c) > 1 or c[0] in succ[c[0]]
    ]


def validate_ldba(a: Ldba) -> ValidationReport:
    """Check the limit-determinism conditions of `a`."""
    violations: list[Violation] = []
    warnings: list[Violation] = []
    all_states = set(a.states)

    for q in sorted(a.nondet - all_states):
        violations.append(
            Violation(rule="partition", state=q, message="unknown state in nondet")
        )
    if a.initial not in all_states:
        violations.append(
            Violation(
                rule="initial-nondet", state=a.initial, message="unknown initial state"
            )
        )
    elif a.initial not in a.nondet:
        violations.append(
            Violation(
                rule="initial-nondet",
                state=a.initial,
                message="initial state must be in the nondeterministic component",
            )
        )
    for q in sorted(a.accepting):
        if q not in all_states or q in a.nondet:
            violations.append(
                Violation(
                    rule="accepting-det",
                    state=q,
                    message="accepting state must be in the deterministic component",
                )
            )

    det = a.det_states
    for (q, label), succ in sorted(
        a.letter_transitions.items(), key=lambda kv: (kv[0][0], sorted(kv[0][1]))
    ):
        word = sorted(label)
        if len(succ) > 1:
            rule = "nondet-branching" if q in a.nondet else "det-branching"
            violations.append(
                Violation(
                    rule=rule,
                    state=q,
                    letter=word,
                    message=f"{len(succ)} letter successors",
                )
            )
        if q in det and not succ <= det:
            violations.append(
                Violation(
                    rule="det-closed",
                    state=q,
                    letter=word,
                    message="deterministic state leaves the deterministic component",
                )
            )
    for q, succ in sorted(a.epsilon_transitions.items()):
        if succ and q in det:
            violations.append(
                Violation(
                    rule="det-epsilon",
                    state=q,
                    message="epsilon edge out of a deterministic state",
                )
            )

    if a.initial in all_states:
        for cycle in _epsilon_cycles(a, _reachable(a) & all_states):
            warnings.append(
                Violation(
                    rule="epsilon-cycle",
                    state=min(cycle),
                    message=f"epsilon cycle through states {sorted(cycle)}",
                )
            )
    for w in warnings:
        logger.warning("LDBA %s", w.message)
    return ValidationReport(violations=violations, warnings=warnings)
