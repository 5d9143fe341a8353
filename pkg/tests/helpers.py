"""Shared graph builders and independent oracles for the test suite."""

from __future__ import annotations

import random
from itertools import combinations

from bicount.graph import BipartiteGraph


def four_cycle() -> BipartiteGraph:
    return BipartiteGraph.build([(0, 0), (0, 1), (1, 0), (1, 1)])


def three_path() -> BipartiteGraph:
    # u0-v0, u0-v1, u1-v1: a single three-edge path.
    return BipartiteGraph.build([(0, 0), (0, 1), (1, 1)])


def complete_3x2() -> BipartiteGraph:
    return BipartiteGraph.build([(i, j) for i in range(3) for j in range(2)])


def star(leaves: int, center_upper: bool = True) -> BipartiteGraph:
    if center_upper:
        return BipartiteGraph.build([(0, j) for j in range(leaves)])
    return BipartiteGraph.build([(i, 0) for i in range(leaves)])


def end_dominance_example() -> BipartiteGraph:
    """A shared middle (upper 0, internal ID 4) whose four lower neighbors
    are padded so their degrees order as v0 > v3 > middle > v2 > v1."""
    pairs = [(0, 0), (0, 1), (0, 2), (0, 3)]
    pairs += [(k, 0) for k in range(1, 6)]    # v0 degree 6
    pairs += [(k, 3) for k in range(6, 10)]   # v3 degree 5
    pairs += [(10, 2)]                        # v2 degree 2
    return BipartiteGraph.build(pairs)


def transpose(g: BipartiteGraph) -> BipartiteGraph:
    """Swap the two layers, preserving the edge order."""
    l = g.lower_count
    pairs = [(v, u - l) for u, v in g.edges]
    return BipartiteGraph.build(pairs, g.lower_count, g.upper_count)


def random_graph_set(count: int, max_side: int, probs, seed: int):
    """Seeded random bipartite graphs cycling through the edge probabilities."""
    rng = random.Random(seed)
    graphs = []
    for i in range(count):
        r = rng.randint(1, max_side)
        l = rng.randint(1, max_side)
        p = probs[i % len(probs)]
        pairs = [(a, b) for a in range(r) for b in range(l) if rng.random() < p]
        graphs.append(BipartiteGraph.build(pairs, r, l))
    return graphs


def priority_by_comparison(g: BipartiteGraph) -> list[int]:
    """Comparison-sort oracle for the degree-major, ID-minor total order."""
    order = sorted(range(g.vertex_count), key=lambda v: (g.degrees[v], v))
    priority = [0] * g.vertex_count
    for i, v in enumerate(order):
        priority[v] = i + 1
    return priority


def brute_force_per_vertex(g: BipartiteGraph) -> list[int]:
    """Quadruple enumeration crediting all four member vertices."""
    neighbor_sets = [set(a) for a in g.adjacency]
    lowers = list(g.lower_vertices())
    result = [0] * g.vertex_count
    for u, w in combinations(g.upper_vertices(), 2):
        nu, nw = neighbor_sets[u], neighbor_sets[w]
        for i, v in enumerate(lowers):
            if v in nu and v in nw:
                for x in lowers[i + 1:]:
                    if x in nu and x in nw:
                        result[u] += 1
                        result[w] += 1
                        result[v] += 1
                        result[x] += 1
    return result


def brute_force_three_paths(g: BipartiteGraph) -> int:
    """Enumerate three-edge simple paths one by one around each middle edge."""
    adjacency = g.adjacency
    total = 0
    for u, v in g.edges:
        for a in adjacency[u]:
            if a == v:
                continue
            for d in adjacency[v]:
                if d == u:
                    continue
                total += 1
    return total
