import itertools

import networkx as nx
import numpy as np
import pytest

from geomatch.errors import InvalidMatching, TooLarge
from geomatch.graph import build_graph, from_edges
from geomatch.oracle import (
    blossom_maximum_matching,
    exhaustive_matching_size,
    has_augmenting_path,
    is_valid_matching,
    validate_matching,
)

from conftest import random_graph, unit_disks


def cycle(n):
    return from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n):
    return from_edges(n, itertools.combinations(range(n), 2))


def petersen():
    g = nx.petersen_graph()
    return from_edges(10, g.edges())


@pytest.mark.parametrize("g, size", [
    (cycle(5), 2),
    (complete(6), 3),
    (petersen(), 5),
    (from_edges(0, []), 0),
    (from_edges(2, [(0, 1)]), 1),
])
def test_known_sizes(g, size):
    pairs = blossom_maximum_matching(g)
    assert len(pairs) == size
    assert is_valid_matching(g, pairs)
    if g.n <= 16:
        assert exhaustive_matching_size(g) == size


def test_all_graphs_on_five_vertices():
    edges = list(itertools.combinations(range(5), 2))
    for mask in range(1 << len(edges)):
        g = from_edges(5, [e for b, e in enumerate(edges) if mask >> b & 1])
        assert len(blossom_maximum_matching(g)) == exhaustive_matching_size(g)


def test_random_small_graphs(rng):
    for _ in range(500):
        n = int(rng.integers(1, 15))
        g = random_graph(rng, n, float(rng.uniform(0.05, 0.7)))
        assert len(blossom_maximum_matching(g)) == exhaustive_matching_size(g)


def test_matches_networkx_and_berge(rng):
    for _ in range(30):
        g = build_graph(unit_disks(rng, int(rng.integers(10, 200)), float(rng.uniform(1, 6))))
        pairs = blossom_maximum_matching(g)
        ref = nx.Graph(list(g.edges()))
        assert len(pairs) == len(nx.max_weight_matching(ref, maxcardinality=True))
        try:
            assert not has_augmenting_path(g, pairs)
        except TooLarge:
            pass


def test_augmenting_path_found_for_suboptimal():
    g = from_edges(4, [(0, 1), (1, 2), (2, 3)])
    assert has_augmenting_path(g, [(1, 2)])
    assert not has_augmenting_path(g, [(0, 1), (2, 3)])


def test_validate_matching_errors():
    g = from_edges(3, [(0, 1), (1, 2)])
    with pytest.raises(InvalidMatching):
        validate_matching(g, [(0, 2)])
    with pytest.raises(InvalidMatching):
        validate_matching(g, [(0, 1), (1, 2)])
    assert validate_matching(g, [(2, 1)]) == [(1, 2)]


def test_exhaustive_limit():
    with pytest.raises(TooLarge):
        exhaustive_matching_size(from_edges(17, []))


def test_deterministic(rng):
    g = random_graph(np.random.default_rng(3), 40, 0.1)
    assert blossom_maximum_matching(g) == blossom_maximum_matching(g)
