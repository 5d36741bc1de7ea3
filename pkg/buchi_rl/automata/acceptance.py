from collections import deque

from buchi_rl.automata.models import Ldba
from buchi_rl.errors import UnknownStateError
from buchi_rl.graph import strongly_connected_components
from buchi_rl.ltl.models import LassoWord


def epsilon_successors(a: Ldba, q: int) -> frozenset[int]:
    if not 0 <= q < a.n_states:
        raise UnknownStateError(f"state {q} is not a state of the automaton")
    return a.eps(q)


def accepting_components(a: Ldba, w: LassoWord) -> list[list[tuple[int, int]]]:
    """SCCs of the run graph on `w` that witness acceptance.

    Nodes are (word position, automaton state); letter edges advance the
    position, ε-edges keep it. A component witnesses acceptance when it holds
    an accepting state and at least one letter edge, i.e. a cycle that keeps
    consuming input.
    """
    nodes: dict[tuple[int, int], int] = {}
    order: list[tuple[int, int]] = []
    letter_edges: list[list[int]] = []
    eps_edges: list[list[int]] = []

    def visit(node: tuple[int, int]) -> int:
        if node not in nodes:
            nodes[node] = len(order)
            order.append(node)
            letter_edges.append([])
            eps_edges.append([])
            queue.append(node)
        return nodes[node]

    queue: deque[tuple[int, int]] = deque()
    visit((0, a.initial))
    while queue:
        pos, q = queue.popleft()
        v = nodes[(pos, q)]
        nxt = w.successor(pos)
        for target in sorted(a.successors(q, w.position(pos))):
            letter_edges[v].append(visit((nxt, target)))
        for target in sorted(a.eps(q)):
            eps_edges[v].append(visit((pos, target)))

    successors = [le + ee for le, ee in zip(letter_edges, eps_edges)]
    witnesses = []
    for component in strongly_connected_components(successors, [0]):
        members = set(component)
        if not any(order[v][1] in a.accepting for v in component):
            continue
        if any(t in members for v in component for t in letter_edges[v]):
            witnesses.append(sorted(order[v] for v in component))
    return witnesses


def ldba_accepts_lasso(a: Ldba, w: LassoWord) -> bool:
    return bool(accepting_components(a, w))
