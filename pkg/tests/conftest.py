import itertools
import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from geomatch.geometry import Box, Disk
from geomatch.graph import from_edges
from geomatch.tree import SeparatorTree, TreeNode

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


def unit_disks(rng, n, avg_degree=4.0):
    side = math.sqrt(max(n, 1) * 4 * math.pi / avg_degree)
    return [Disk(float(x), float(y), 1.0) for x, y in rng.uniform(0, side, size=(n, 2))]


def mixed_objects(rng, n, side=10.0):
    out = []
    for _ in range(n):
        x, y = rng.uniform(0, side, size=2)
        if rng.random() < 0.5:
            out.append(Disk(float(x), float(y), float(rng.uniform(0.5, 2.5))))
        else:
            w, h = rng.uniform(0.5, 3.0, size=2)
            out.append(Box(float(x), float(y), float(x + w), float(y + h)))
    return out


def random_graph(rng, n, prob):
    edges = [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < prob]
    return from_edges(n, edges)


def random_tree(rng, n, leaf=6):
    """Random separator tree over a shuffled vertex set."""
    perm = rng.permutation(n).tolist()
    nodes = []

    def build(verts, parent):
        t = len(nodes)
        nodes.append(None)
        if len(verts) <= leaf or rng.random() < 0.15:
            nodes[t] = TreeNode(tuple(sorted(verts)), parent, ())
            return t
        k = int(rng.integers(1, max(2, len(verts) // 4) + 1))
        z, rest = verts[:k], verts[k:]
        parts = int(rng.integers(1, 4))
        cuts = sorted(rng.choice(np.arange(1, len(rest)), size=min(parts - 1, len(rest) - 1),
                                 replace=False).tolist()) if len(rest) > 1 else []
        pieces = [rest[a:b] for a, b in zip([0] + cuts, cuts + [len(rest)]) if rest[a:b]]
        kids = tuple(build(pc, t) for pc in pieces)
        nodes[t] = TreeNode(tuple(sorted(z)), parent, kids)
        return t

    build(perm, -1)
    return SeparatorTree(nodes, 0, n)


def tree_patterned_matrix(rng, tree, p, density=0.5):
    """Random matrix whose nonzeros only join ancestor-related tree nodes."""
    n = tree.n
    node_of = tree.node_of
    A = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        A[i, i] = int(rng.integers(1, p))
        for j in range(i + 1, n):
            if tree.related(int(node_of[i]), int(node_of[j])) and rng.random() < density:
                A[i, j] = int(rng.integers(0, p))
                A[j, i] = int(rng.integers(0, p))
    return A


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
