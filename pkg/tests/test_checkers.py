"""The test-suite oracles must themselves be trustworthy: cross-check the
subset-DP extension counter against naive permutation filtering, and sanity
check the topological-order and path helpers."""

from __future__ import annotations

import random

from checkers import (
    brute_force_extensions,
    count_linear_extensions,
    is_topological_order,
    is_valid_firing,
    maximal_simple_paths,
)


def test_dp_counter_agrees_with_permutation_filter():
    rng = random.Random(7)
    for _ in range(200):
        n = rng.randint(1, 6)
        nodes = [f"n{i}" for i in range(n)]
        edges = [
            (nodes[i], nodes[j])
            for i in range(n)
            for j in range(i + 1, n)
            if rng.random() < 0.4
        ]
        brute = brute_force_extensions(nodes, edges)
        assert count_linear_extensions(nodes, edges) == len(brute)
        for p in brute:
            assert is_topological_order(p, nodes, edges)


def test_dp_counter_known_values():
    # A chain has one extension; an antichain has n!.
    chain = ["a", "b", "c", "d"]
    assert count_linear_extensions(chain, list(zip(chain, chain[1:]))) == 1
    assert count_linear_extensions(chain, []) == 24


def test_topological_order_rejects_wrong_length_and_order():
    nodes = ["a", "b"]
    assert is_topological_order(["a", "b"], nodes, [("a", "b")])
    assert not is_topological_order(["b", "a"], nodes, [("a", "b")])
    assert not is_topological_order(["a"], nodes, [])
    assert not is_topological_order(["a", "a"], nodes, [])


def test_firing_checker_includes_trigger_constraints():
    region = ["p", "c"]
    assert is_valid_firing(["p", "c"], region, [], [("p", "c")])
    assert not is_valid_firing(["c", "p"], region, [], [("p", "c")])


def test_maximal_simple_paths_on_a_diamond():
    edges = [("s", "l"), ("s", "r"), ("l", "t"), ("r", "t")]
    assert maximal_simple_paths("s", edges) == [
        ("s", "l", "t"),
        ("s", "r", "t"),
    ]
