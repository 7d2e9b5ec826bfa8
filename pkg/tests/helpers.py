"""Shared random-network builders for the test suite."""

import numpy as np

from dsrsim.graph import GraphSpec


def random_connected_graph(rng, n, extra_edges=2, directed=False):
    """Random spanning tree from the source plus a few extra edges, unit weights."""
    edges = set()
    placed = [n]  # source first
    for i in rng.permutation(n):
        parent = placed[rng.integers(len(placed))]
        edges.add((int(parent), int(i)))
        if not directed and parent != n:
            edges.add((int(i), int(parent)))
        placed.append(int(i))
    for _ in range(extra_edges):
        a, b = rng.integers(n, size=2)
        if a != b:
            edges.add((int(a), int(b)))
            if not directed:
                edges.add((int(b), int(a)))
    return GraphSpec(n_agents=n, edges=tuple((a, b, 1.0) for a, b in sorted(edges)))


def random_undirected_graph(rng, n, extra_edges=2, weighted=False):
    """Fully symmetric weight pattern, source edge included (for potential tests)."""
    pairs = set()
    placed = [n]
    for i in rng.permutation(n):
        parent = placed[rng.integers(len(placed))]
        pairs.add((min(int(parent), int(i)), max(int(parent), int(i))))
        placed.append(int(i))
    for _ in range(extra_edges):
        a, b = rng.integers(n, size=2)
        if a != b:
            pairs.add((min(int(a), int(b)), max(int(a), int(b))))
    edges = []
    for a, b in sorted(pairs):
        w = float(rng.uniform(0.2, 2.0)) if weighted else 1.0
        edges.append((a, b, w))
        edges.append((b, a, w))
    return GraphSpec(n_agents=n, edges=tuple(edges))
