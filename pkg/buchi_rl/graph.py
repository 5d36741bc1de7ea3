"""Strongly connected components.

Tarjan's algorithm driven by an explicit work stack, so graphs with hundreds
of thousands of nodes do not hit the interpreter recursion limit.
Components are emitted in reverse topological order.
"""
from collections.abc import Iterable, Sequence


def strongly_connected_components(
    successors: Sequence[Sequence[int]],
    roots: Iterable[int] | None = None,
) -> list[list[int]]:
    """Return the SCCs of the graph over nodes 0..len(successors)-1.

    `successors[v]` lists the targets of v's edges. When `roots` is given only
    nodes reachable from them are visited.
    """
    n = len(successors)
    index = [-1] * n
    lowlink = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    components: list[list[int]] = []
    counter = 0

    for root in range(n) if roots is None else roots:
        if index[root] != -1:
            continue
        index[root] = lowlink[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        work = [(root, iter(successors[root]))]
        while work:
            v, edges = work[-1]
            descended = False
            for w in edges:
                if index[w] == -1:
                    index[w] = lowlink[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, iter(successors[w])))
                    descended = True
                    break
                if on_stack[w]:
                    lowlink[v] = min(lowlink[v], index[w])
            if descended:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[v])
            if lowlink[v] == index[v]:
                component = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    component.append(w)
                    if w == v:
                        break
                components.append(component)
    return components


def bottom_components(
    successors: Sequence[Sequence[int]],
    roots: Iterable[int] | None = None,
) -> list[list[int]]:
    """SCCs with no edge leaving the component."""
    out = []
    for component in strongly_connected_components(successors, roots):
        members = set(component)
        if all(w in members for v in component for w in successors[v]):
            out.append(sorted(component))
    return out
