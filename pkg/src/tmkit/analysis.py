"""Graph analyses over static models, plus small deterministic graph helpers.

The helpers take explicit node orderings so every traversal (components,
topological sorts) is reproducible from declaration order alone.
"""

from __future__ import annotations

from .errors import DanglingReferenceError, InvalidInputError
from .model import StaticModel
from .validation import validate_static


def weakly_connected_components(
    nodes: tuple[str, ...], edges: list[tuple[str, str]]
) -> list[tuple[str, ...]]:
    """Components of the undirected view, ordered by first appearance."""
    adjacency: dict[str, list[str]] = {n: [] for n in nodes}
    for a, b in edges:
        adjacency[a].append(b)
        adjacency[b].append(a)
    seen: set[str] = set()
    components: list[tuple[str, ...]] = []
    for n in nodes:
        if n in seen:
            continue
        stack = [n]
        comp: set[str] = set()
        while stack:
            cur = stack.pop()
            if cur in comp:
                continue
            comp.add(cur)
            stack.extend(adjacency[cur])
        seen |= comp
        components.append(tuple(x for x in nodes if x in comp))
    return components


def topological_order(nodes: tuple[str, ...], edges: list[tuple[str, str]]) -> tuple[str, ...] | None:
    """Kahn's algorithm, breaking ties by position in ``nodes``; None on a cycle."""
    indegree = {n: 0 for n in nodes}
    succ: dict[str, list[str]] = {n: [] for n in nodes}
    for a, b in edges:
        indegree[b] += 1
        succ[a].append(b)
    order: list[str] = []
    remaining = list(nodes)
    while remaining:
        pick = next((n for n in remaining if indegree[n] == 0), None)
        if pick is None:
            return None
        remaining.remove(pick)
        order.append(pick)
        for n in succ[pick]:
            indegree[n] -= 1
    return tuple(order)


def find_cycle_nodes(nodes: tuple[str, ...], edges: list[tuple[str, str]]) -> list[tuple[str, ...]]:
    """Strongly connected components that contain a cycle, in node order."""
    # Tarjan, iterative; component node order follows the input ordering.
    index_of: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    succ: dict[str, list[str]] = {n: [] for n in nodes}
    self_loops: set[str] = set()
    for a, b in edges:
        succ[a].append(b)
        if a == b:
            self_loops.add(a)
    sccs: list[set[str]] = []
    counter = 0

    for root in nodes:
        if root in index_of:
            continue
        work: list[tuple[str, int]] = [(root, 0)]
        while work:
            node, child_idx = work.pop()
            if child_idx == 0:
                index_of[node] = low[node] = counter
                counter += 1
                stack.append(node)
                on_stack.add(node)
            advanced = False
            children = succ[node]
            while child_idx < len(children):
                child = children[child_idx]
                child_idx += 1
                if child not in index_of:
                    work.append((node, child_idx))
                    work.append((child, 0))
                    advanced = True
                    break
                if child in on_stack:
                    low[node] = min(low[node], index_of[child])
            if advanced:
                continue
            if low[node] == index_of[node]:
                comp: set[str] = set()
                while True:
                    top = stack.pop()
                    on_stack.discard(top)
                    comp.add(top)
                    if top == node:
                        break
                sccs.append(comp)
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])

    cyclic = [c for c in sccs if len(c) > 1 or (next(iter(c)) in self_loops)]
    ordered = [tuple(n for n in nodes if n in c) for c in cyclic]
    ordered.sort(key=lambda comp: nodes.index(comp[0]))
    return ordered


def flow_paths(model: StaticModel, start: str) -> list[tuple[str, ...]]:
    """All maximal simple paths along flow edges from ``start``.

    The model must pass strict validation with no errors; paths come back
    sorted lexicographically so repeated calls agree byte-for-byte.
    """
    if start not in model.action_map():
        raise DanglingReferenceError(f"unknown action {start!r}")
    report = validate_static(model)
    if not report.ok:
        raise InvalidInputError("flow_paths requires a strict-valid model", report=report)

    succ: dict[str, list[str]] = {}
    for e in model.flow_edges():
        succ.setdefault(e.src, []).append(e.dst)
    for targets in succ.values():
        targets.sort()

    paths: list[tuple[str, ...]] = []

    def extend(path: list[str], on_path: set[str]) -> None:
        extensions = [n for n in succ.get(path[-1], ()) if n not in on_path]
        if not extensions:
            paths.append(tuple(path))
            return
        for nxt in extensions:
            path.append(nxt)
            on_path.add(nxt)
            extend(path, on_path)
            on_path.discard(nxt)
            path.pop()

    extend([start], {start})
    return sorted(paths)
