"""Small graph helpers shared by the solvers and the machine verifier."""

from __future__ import annotations

from typing import Callable, Iterable, Sequence


def strongly_connected_components(
    vertices: Iterable[int],
    successors: Callable[[int], Sequence[int]],
) -> list[list[int]]:
    """Tarjan's algorithm, iterative to cope with long chains."""
    index: dict[int, int] = {}
    lowlink: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    components: list[list[int]] = []
    counter = 0

    for root in vertices:
        if root in index:
            continue
        work = [(root, iter(successors(root)))]
        index[root] = lowlink[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = lowlink[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(successors(w))))
                    advanced = True
                    break
                if w in on_stack:
                    lowlink[v] = min(lowlink[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[v])
            if lowlink[v] == index[v]:
                component = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    component.append(w)
                    if w == v:
                        break
                components.append(component)
    return components


def find_cycle_through(
    start: int,
    allowed: Callable[[int], bool],
    successors: Callable[[int], Sequence[int]],
) -> list[int] | None:
    """Vertices of a cycle ``start -> ... -> start`` inside ``allowed``.

    The closing edge back to ``start`` is implicit; ``None`` if no such cycle.
    """
    parents: dict[int, int] = {}
    frontier = [start]
    seen = {start}
    while frontier:
        next_frontier = []
        for v in frontier:
            for w in successors(v):
                if not allowed(w):
                    continue
                if w == start:
                    path = []
                    cur = v
                    while cur != start:
                        path.append(cur)
                        cur = parents[cur]
                    path.append(start)
                    path.reverse()
                    return path
                if w not in seen:
                    seen.add(w)
                    parents[w] = v
                    next_frontier.append(w)
        frontier = next_frontier
    return None
