"""Independent checking oracles used by the test suite.

Everything in this file is deliberately written against the *definitions*
(topological order, linear extension counting, simple paths) rather than by
calling back into the package, so that package bugs cannot hide behind
self-agreement.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence


def is_topological_order(sequence: Sequence[str], nodes: Iterable[str],
                         edges: Iterable[tuple[str, str]]) -> bool:
    """True iff `sequence` is a permutation of `nodes` respecting every edge."""
    nodes = set(nodes)
    if len(sequence) != len(nodes) or set(sequence) != nodes:
        return False
    position = {n: i for i, n in enumerate(sequence)}
    return all(position[a] < position[b] for a, b in edges)


def is_valid_firing(sequence: Sequence[str], region: Iterable[str],
                    flow_edges: Iterable[tuple[str, str]],
                    trigger_edges: Iterable[tuple[str, str]]) -> bool:
    """Check one trace step: the firing list must be a topological order of
    the region's flow edges, with every trigger target after its source."""
    constraints = list(flow_edges) + list(trigger_edges)
    return is_topological_order(sequence, region, constraints)


def count_linear_extensions(nodes: Sequence[str],
                            edges: Iterable[tuple[str, str]]) -> int:
    """Count linear extensions of a DAG by dynamic programming over subsets.

    A different algorithm from the package's backtracking enumerator: the
    number of extensions of a downward-closed subset S is summed over the
    maximal elements that could have been placed last.
    """
    order = list(nodes)
    if len(order) > 20:
        raise ValueError("too many nodes for the subset DP")
    index = {n: i for i, n in enumerate(order)}
    pred_mask = [0] * len(order)
    for a, b in edges:
        pred_mask[index[b]] |= 1 << index[a]

    full = (1 << len(order)) - 1
    counts = {0: 1}
    # Iterate subsets in increasing popcount order via plain integer order:
    # every subset's sub-subsets are numerically smaller, so a single sweep
    # suffices when we only ever look up S without one of its elements.
    for subset in range(1, full + 1):
        total = 0
        for i in range(len(order)):
            bit = 1 << i
            if subset & bit and (pred_mask[i] & subset) == (pred_mask[i] & ~bit):
                # i's predecessors all lie inside subset - {i}: i can be last.
                total += counts.get(subset ^ bit, 0)
        counts[subset] = total
    return counts[full]


def brute_force_extensions(nodes: Sequence[str],
                           edges: Iterable[tuple[str, str]],
                           ) -> list[tuple[str, ...]]:
    """All linear extensions by filtering full permutations (tiny inputs)."""
    from itertools import permutations

    edge_list = list(edges)
    if len(list(nodes)) > 8:
        raise ValueError("brute force is for <= 8 nodes")
    return [p for p in permutations(nodes)
            if all(p.index(a) < p.index(b) for a, b in edge_list)]


def maximal_simple_paths(start: str,
                         edges: Iterable[tuple[str, str]],
                         ) -> list[tuple[str, ...]]:
    """All maximal simple paths from `start`, by exhaustive walk."""
    succs: dict[str, list[str]] = {}
    for a, b in edges:
        succs.setdefault(a, []).append(b)
    results: list[tuple[str, ...]] = []

    def walk(path: list[str]) -> None:
        extended = False
        for nxt in succs.get(path[-1], ()):
            if nxt not in path:
                extended = True
                walk(path + [nxt])
        if not extended:
            results.append(tuple(path))

    walk([start])
    return sorted(results)
