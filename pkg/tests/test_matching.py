import itertools

import numpy as np
import pytest

from geomatch.errors import RetryExhausted
from geomatch.field import gen_prime, inverse
from geomatch.geometry import Disk
from geomatch.graph import build_graph, from_edges
from geomatch.matching import (
    MatchInfo,
    algebraic_maximum_matching,
    allowed_edge,
    corner_inverse,
    extract_matchable_subset,
    matching_size,
    maximal_allowed_submatching,
    tutte_matrix,
)
from geomatch.oracle import blossom_maximum_matching, exhaustive_matching_size, validate_matching
from geomatch.separator import SeparatorParams

from conftest import random_graph, unit_disks

P = gen_prime(100).p


def test_tutte_is_skew_symmetric(rng):
    g = random_graph(rng, 12, 0.4)
    A = tutte_matrix(g, 1, P).dense()
    assert np.array_equal((A + A.T) % P, np.zeros_like(A))
    assert all(A[u, v] for u, v in g.edges())


def test_rank_law_small(rng):
    for _ in range(100):
        g = random_graph(rng, int(rng.integers(1, 12)), 0.35)
        assert matching_size(g, rng) == exhaustive_matching_size(g)


def test_matchable_subset_size_and_perfectness(rng):
    for _ in range(10):
        g = build_graph(unit_disks(rng, 60, 3.0))
        W = extract_matchable_subset(g, None, rng, P)
        mu = len(blossom_maximum_matching(g))
        assert len(W) == 2 * mu
        from geomatch.graph import induced_subgraph

        h, _ = induced_subgraph(g, W)
        assert 2 * len(blossom_maximum_matching(h)) == h.n


def test_corner_inverse_matches_dense_inverse(rng):
    # Even cycle: Tutte matrix nonsingular for generic values.
    n = 10
    g = from_edges(n, [(i, (i + 1) % n) for i in range(n)] + [(0, 5)])
    t = tutte_matrix(g, rng, P)
    full = inverse(t.dense(), P)
    N = [0, 3, 4, 7]
    C = corner_inverse(t.rows, N, None, P, adj=g.adj)
    assert np.array_equal(C, full[np.ix_(N, N)])


def test_allowed_edges_in_two_triangles_bridge():
    # Two triangles joined by a bridge: the bridge lies in no perfect matching.
    g = from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])
    t = tutte_matrix(g, 7, P)
    C = inverse(t.dense(), P)
    assert allowed_edge(C, 2, 3)
    g2 = from_edges(4, [(0, 1), (1, 2), (2, 3)])
    C2 = inverse(tutte_matrix(g2, 7, P).dense(), P)
    assert not allowed_edge(C2, 1, 2)
    assert allowed_edge(C2, 0, 1)


def test_submatching_stays_inside_a_perfect_matching(rng):
    g = from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)])
    C = inverse(tutte_matrix(g, rng, P).dense(), P)
    kept = maximal_allowed_submatching([(0, 1), (2, 3), (4, 5), (0, 3)], C.copy(), P)
    assert len(kept) == 3


@pytest.mark.parametrize("k", [2, 5, 8])
def test_concentric_disks(k):
    objs = [Disk(0, 0, r) for r in range(1, k + 1)]
    assert len(algebraic_maximum_matching(objs, seed=k)) == k // 2


def test_empty_and_singleton():
    assert algebraic_maximum_matching([], seed=0) == []
    assert algebraic_maximum_matching([Disk(0, 0, 1)], seed=0) == []


def test_graph_only_input(rng):
    g = random_graph(rng, 14, 0.3)
    pairs = algebraic_maximum_matching(graph=g, seed=3)
    validate_matching(g, pairs)
    assert len(pairs) == exhaustive_matching_size(g)


def test_matches_oracle_with_deep_trees(rng):
    params = SeparatorParams(leaf_min=12, leaf_factor=1.0)
    for seed in range(8):
        objs = unit_disks(rng, int(rng.integers(40, 200)), float(rng.uniform(1, 5)))
        pairs, info = algebraic_maximum_matching(objs, seed=seed, params=params, return_info=True)
        g = build_graph(objs)
        validate_matching(g, pairs)
        assert len(pairs) == len(blossom_maximum_matching(g))
        assert isinstance(info, MatchInfo) and info.attempts >= 1
        assert max(info.node_iterations, default=0) <= 16


def test_seed_determinism(rng):
    objs = unit_disks(rng, 80, 4.0)
    assert algebraic_maximum_matching(objs, seed=11) == algebraic_maximum_matching(objs, seed=11)


def test_retry_exhaustion_is_loud(monkeypatch, rng):
    import geomatch.matching as m

    def always_fail(*a, **k):
        raise m.RankMismatch(0)

    monkeypatch.setattr(m, "extract_matchable_subset", always_fail)
    with pytest.raises(RetryExhausted):
        algebraic_maximum_matching(unit_disks(rng, 10, 3.0), seed=0, restarts=2)


def test_small_graphs_always_valid():
    # Every returned matching is valid; a failed draw surfaces as RetryExhausted.
    for g_edges in itertools.islice(itertools.combinations(itertools.combinations(range(5), 2), 4), 30):
        g = from_edges(5, g_edges)
        try:
            pairs = algebraic_maximum_matching(graph=g, seed=1)
        except RetryExhausted:
            continue
        validate_matching(g, pairs)
