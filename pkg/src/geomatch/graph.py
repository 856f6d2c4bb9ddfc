"""Intersection graphs and their induced / bipartite restrictions."""

from __future__ import annotations

import math
from bisect import bisect_left
from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from .geometry import intersects


@dataclass(frozen=True)
class IntersectionGraph:
    """Simple undirected graph with sorted adjacency tuples.

    ``labels[v]`` is the id of v in the root graph it was derived from (the
    object index for graphs built from geometry).
    """

    adj: tuple[tuple[int, ...], ...]
    labels: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.adj)

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def edges(self):
        for u, nb in enumerate(self.adj):
            for v in nb:
                if u < v:
                    yield (u, v)

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.adj[u]
        i = bisect_left(nb, v)
        return i < len(nb) and nb[i] == v

    def to_edge_list(self) -> str:
        return "".join(f"{u} {v}\n" for u, v in self.edges())


def from_edges(n: int, edges, labels=None) -> IntersectionGraph:
    nb = [set() for _ in range(n)]
    for u, v in edges:
        u, v = int(u), int(v)
        if u == v:
            raise ValueError("self-loop")
        nb[u].add(v)
        nb[v].add(u)
    return IntersectionGraph(tuple(tuple(sorted(s)) for s in nb),
                             tuple(range(n)) if labels is None else tuple(labels))


def parse_edge_list(text: str, n: int) -> IntersectionGraph:
    edges = [tuple(map(int, ln.split())) for ln in text.splitlines() if ln.strip()]
    return from_edges(n, edges)


def _level(obj) -> int:
    return math.ceil(math.log2(obj.diameter()))


def candidate_pairs(objects):
    """Pairs (i < j) whose anchors are close enough that they might intersect.

    Object i goes to grid level l_i = ceil(log2 diam) and cell
    floor(anchor / 2**l). Two intersecting objects have anchors at most
    (2**l_i + 2**l_j) / 2 <= 2**max(l_i, l_j) apart, so looking up the 3x3
    block around the finer object's anchor at the coarser level finds them.
    """
    levels = [_level(o) for o in objects]
    grids: dict[int, dict] = defaultdict(lambda: defaultdict(list))
    anchors = [o.anchor for o in objects]
    for i, (o, lv) in enumerate(zip(objects, levels)):
        side = 2.0 ** lv
        grids[lv][(math.floor(anchors[i][0] / side), math.floor(anchors[i][1] / side))].append(i)
    present = sorted(grids)
    pairs = set()
    for i, lv in enumerate(levels):
        ax, ay = anchors[i]
        for L in present:
            if L < lv:
                continue
            side = 2.0 ** L
            cx, cy = math.floor(ax / side), math.floor(ay / side)
            g = grids[L]
            for dx in (-1, 0, 1):
                for dy in (-1, 0, 1):
                    for j in g.get((cx + dx, cy + dy), ()):
                        if j != i:
                            pairs.add((i, j) if i < j else (j, i))
    return pairs


def build_graph(objects) -> IntersectionGraph:
    """Intersection graph of the objects (closed regions)."""
    nb = [[] for _ in objects]
    for i, j in candidate_pairs(objects):
        if intersects(objects[i], objects[j]):
            nb[i].append(j)
            nb[j].append(i)
    return IntersectionGraph(tuple(tuple(sorted(a)) for a in nb), tuple(range(len(objects))))


def brute_force_graph(objects) -> IntersectionGraph:
    n = len(objects)
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if intersects(objects[i], objects[j])]
    return from_edges(n, edges)


def induced_subgraph(g: IntersectionGraph, keep) -> tuple[IntersectionGraph, np.ndarray]:
    """Induced subgraph on ``keep`` with dense ids; returns it and new->old ids."""
    keep = np.asarray(sorted(set(int(v) for v in keep)), dtype=np.int64)
    local = {int(v): i for i, v in enumerate(keep)}
    adj = tuple(tuple(local[w] for w in g.adj[v] if w in local) for v in keep.tolist())
    labels = tuple(g.labels[v] for v in keep.tolist())
    return IntersectionGraph(adj, labels), keep


def bipartite_restrict(g: IntersectionGraph, color) -> IntersectionGraph:
    """Keep exactly the edges whose endpoints have different colours."""
    adj = tuple(tuple(w for w in g.adj[v] if color[w] != color[v]) for v in range(g.n))
    return IntersectionGraph(adj, g.labels)
