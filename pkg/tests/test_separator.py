import math

import numpy as np
import pytest

from geomatch.errors import InvalidMatching, SeparatorNotFound
from geomatch.geometry import Disk, density_estimate
from geomatch.graph import build_graph, from_edges
from geomatch.oracle import blossom_maximum_matching, validate_matching
from geomatch.separator import (
    Circle,
    Separation,
    SeparatorParams,
    build_separator_tree,
    check_separation,
    circle_separator,
    classify,
    split_separator_vertices,
    unsplit_matching,
    validate_tree,
)

from conftest import unit_disks


def test_classify_inside_outside_crossing():
    objs = [Disk(0, 0, 1), Disk(10, 0, 1), Disk(5, 0, 1)]
    lab = classify(objs, Circle(0, 0, 5))
    assert lab.tolist() == [0, 1, 2]


def test_circle_separator_contract(rng):
    objs = unit_disks(rng, 300, 3.0)
    g = build_graph(objs)
    rho = density_estimate(objs, g.adj)
    _, sep, tries = circle_separator(objs, rng, rho_hat=rho)
    n = len(objs)
    assert len(sep.Z) <= 4 * math.sqrt(rho * n)
    assert sep.balance() <= 0.96
    assert check_separation(g, sep) == 0
    assert sorted(sep.X + sep.Y + sep.Z) == list(range(n))
    assert tries >= 1


def test_circle_separator_gives_up():
    stacked = [Disk(0, 0, 1) for _ in range(30)]
    with pytest.raises(SeparatorNotFound):
        circle_separator(stacked, np.random.default_rng(0), max_retries=5)


def test_circle_separator_needs_two_objects():
    with pytest.raises(ValueError):
        circle_separator([Disk(0, 0, 1)], np.random.default_rng(0))


def test_split_of_triangle_clique_is_small():
    g = from_edges(5, [(0, 1), (1, 2), (0, 2), (0, 3), (1, 4)])
    sep = Separation(X=(3,), Y=(4,), Z=(0, 1, 2))
    sg, zstar, xstar, ystar = split_separator_vertices(g, sep)
    assert len(zstar) <= 4 * 3 + 6 * 3
    h = sg.graph
    # No edge may join the two sides after splitting.
    xs, ys = set(xstar), set(ystar)
    assert not any(w in ys for v in xs for w in h.adj[v])
    assert all(h.degree(v) <= 3 for v in zstar)
    mu_g = len(blossom_maximum_matching(g))
    assert len(blossom_maximum_matching(h)) == mu_g + sg.k


@pytest.mark.parametrize("seed", range(8))
def test_split_law_and_unsplit(seed):
    rng = np.random.default_rng(seed)
    objs = unit_disks(rng, int(rng.integers(10, 80)), float(rng.uniform(2, 7)))
    g = build_graph(objs)
    sg, tree, _ = build_separator_tree(objs, SeparatorParams(leaf_min=6, leaf_factor=0.5), rng, graph=g)
    h = sg.graph
    m_h = blossom_maximum_matching(h)
    assert len(m_h) == len(blossom_maximum_matching(g)) + sg.k
    back = unsplit_matching(m_h, sg)
    validate_matching(g, back)
    assert len(back) == len(m_h) - sg.k


def test_tree_properties_on_larger_instance(rng):
    objs = unit_disks(rng, 600, 4.0)
    sg, tree, stats = build_separator_tree(objs, rng=rng)
    assert validate_tree(tree, sg.graph) == []
    assert sg.graph.max_degree() <= 4
    assert len(tree) > 1
    assert all(z <= 4 * math.sqrt(tree.params.extra["rho_hat"] * n) for z, n in stats.separator_sizes)


def test_unsplit_rejects_non_edges(rng):
    objs = unit_disks(rng, 100, 4.0)
    sg, _, _ = build_separator_tree(objs, SeparatorParams(leaf_min=10, leaf_factor=1.0), rng)
    u = next(v for v in range(sg.graph.n) if sg.graph.degree(v) < sg.graph.n - 1)
    w = next(x for x in range(sg.graph.n) if x != u and not sg.graph.has_edge(u, x))
    with pytest.raises(InvalidMatching):
        unsplit_matching([(u, w)], sg)


def test_validate_tree_catches_bad_ownership(rng):
    objs = unit_disks(rng, 100, 4.0)
    sg, tree, _ = build_separator_tree(objs, SeparatorParams(leaf_min=10, leaf_factor=1.0), rng)
    small = from_edges(3, [(0, 1)])
    assert validate_tree(tree, small)
