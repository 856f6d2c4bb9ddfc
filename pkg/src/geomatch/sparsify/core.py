"""Shrinking a fat-object instance to a low-depth subset with the same matching number.

Objects are grouped into clusters by their lowest integer point. Two clusters
whose points are close (L-infinity distance at most twice the object size)
are joined in a pattern graph H of maximum degree lambda. For every pattern
edge only a few objects per side need to survive: either a bipartite
matching of size 2*lambda + 1 between the two clusters, or the endpoints of
a maximal one plus up to lambda cross-neighbours per endpoint. Everything
else in a cluster is a clique and is matched internally afterwards.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from ..geometry import Box, Disk, lowest_pierce_point
from .query import make_structure


def assign_clusters(objects) -> dict[tuple[int, int], list[int]]:
    """Map each lowest pierce point to the ascending ids of its objects."""
    out: dict[tuple[int, int], list[int]] = {}
    for i, o in enumerate(objects):
        out.setdefault(lowest_pierce_point(o), []).append(i)
    return dict(sorted(out.items()))


def square_side(objects) -> float:
    """Side of the smallest axis-parallel square that fits every object."""
    side = 0.0
    for o in objects:
        x0, y0, x1, y1 = o.bbox
        side = max(side, x1 - x0, y1 - y0)
    return side


def check_fat(objects):
    """Every object must contain an axis-parallel unit square."""
    for o in objects:
        if isinstance(o, Disk):
            ok = o.r * o.r * 2.0 >= 1.0
        elif isinstance(o, Box):
            ok = o.x1 - o.x0 >= 1.0 and o.y1 - o.y0 >= 1.0
        else:
            ok = False
        if not ok:
            raise ValueError(f"{o} does not contain a unit square")


@dataclass
class PatternGraph:
    points: list[tuple[int, int]]
    adj: dict[tuple[int, int], list[tuple[int, int]]]
    side: float

    @property
    def lam(self) -> int:
        return max((len(v) for v in self.adj.values()), default=0)

    def degree(self, p) -> int:
        return len(self.adj[p])

    def edges(self):
        for p in self.points:
            for q in self.adj[p]:
                if p < q:
                    yield (p, q)


def build_pattern_graph(points, side: float) -> PatternGraph:
    """Join points at L-infinity distance at most 2 * side."""
    pts = sorted(points)
    adj = {p: [] for p in pts}
    if len(pts) > 1:
        tree = cKDTree(np.asarray(pts, dtype=float))
        for i, j in sorted(tree.query_pairs(2.0 * side + 1e-9, p=np.inf)):
            adj[pts[i]].append(pts[j])
            adj[pts[j]].append(pts[i])
    for p in pts:
        adj[p].sort()
    return PatternGraph(pts, adj, side)


def max_pattern_degree(side: float) -> int:
    """Integer points other than p within L-infinity distance 2 * side."""
    k = math.floor(2.0 * side)
    return (2 * k + 1) ** 2 - 1


def cluster_cap(degree: int, lam: int) -> int:
    """Largest possible |W intersect U_p| after parity repair."""
    return degree * 2 * (2 * lam + 1) * (lam + 1) + 1


def depth_cap(side: float, lam: int | None = None) -> int:
    """Constructive depth bound: clusters that can cover a point times the cluster cap."""
    lam = max_pattern_degree(side) if lam is None else lam
    reach = math.floor(side)
    return (2 * reach + 1) ** 2 * cluster_cap(lam, lam)


def depth_constant(psis=(1, 2, 3)) -> int:
    """K with depth_cap(2 * psi) <= K * psi**8 for every listed size ratio."""
    return max(math.ceil(depth_cap(2.0 * psi) / psi ** 8) for psi in psis)


def sparsify_one_edge(objects, up, uq, lam, sp, sq):
    """Objects of clusters p, q that must be kept for the pattern edge pq.

    ``sp`` / ``sq`` are query structures over ``up`` / ``uq`` (ids in the
    same order); both are rolled back before returning.
    """
    matched = []
    for a, u in enumerate(up):
        if len(matched) == 2 * lam + 1:
            break
        b = sq.query(objects[u])
        if b is not None:
            sq.delete(b)
            matched.append((a, b))
    sq.rollback()
    keep = {up[a] for a, _ in matched} | {uq[b] for _, b in matched}
    if len(matched) == 2 * lam + 1:
        return keep
    for a, _ in matched:
        keep.update(uq[b] for b in _neighbours(objects[up[a]], sq, lam))
    for _, b in matched:
        keep.update(up[a] for a in _neighbours(objects[uq[b]], sp, lam))
    return keep


def _neighbours(obj, structure, limit):
    out = []
    while len(out) < limit:
        i = structure.query(obj)
        if i is None:
            break
        structure.delete(i)
        out.append(i)
    structure.rollback()
    return out


@dataclass
class SparsifierResult:
    kept: list[int]
    residuals: dict[tuple[int, int], list[int]]
    clusters: dict[tuple[int, int], list[int]]
    pattern: PatternGraph
    structure: str
    parity_moves: int = 0
    kept_per_cluster: dict = field(default_factory=dict)

    @property
    def lam(self) -> int:
        return self.pattern.lam

    @property
    def side(self) -> float:
        return self.pattern.side

    def to_dict(self) -> dict:
        return {
            "kept": self.kept,
            "residuals": [[list(p), ids] for p, ids in self.residuals.items() if ids],
            "lambda": self.lam,
            "side": self.side,
            "structure": self.structure,
            "parity_moves": self.parity_moves,
            "depth_constant": depth_constant(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def sparsify(objects, structure: str = "naive", side: float | None = None) -> SparsifierResult:
    """Subset W and per-cluster leftovers with mu(G) = mu(G[W]) + sum |leftover| / 2.

    Each leftover has even size and lies in one cluster (a clique), so any
    maximum matching of G[W] extends to one of G by pairing leftovers up.
    """
    objects = list(objects)
    check_fat(objects)
    clusters = assign_clusters(objects)
    side = square_side(objects) if side is None else side
    pattern = build_pattern_graph(clusters, side)
    lam = pattern.lam
    structs = {}

    def get(p):
        if p not in structs:
            structs[p] = make_structure(structure, [objects[i] for i in clusters[p]], q=p)
        return structs[p]

    kept = set()
    for p, q in pattern.edges():
        kept |= sparsify_one_edge(objects, clusters[p], clusters[q], lam, get(p), get(q))
    residuals, moves = {}, 0
    for p, ids in clusters.items():
        rest = [i for i in ids if i not in kept]
        if len(rest) % 2:
            kept.add(rest.pop(0))
            moves += 1
        residuals[p] = rest
    per = {p: sum(1 for i in ids if i in kept) for p, ids in clusters.items()}
    return SparsifierResult(sorted(kept), residuals, clusters, pattern, structure, moves, per)


def combine_matchings(pairs, residuals) -> list[tuple[int, int]]:
    """Matching on W (object ids) plus consecutive pairs inside each leftover."""
    out = [(min(u, v), max(u, v)) for u, v in pairs]
    for ids in residuals.values():
        out.extend((ids[k], ids[k + 1]) for k in range(0, len(ids) - 1, 2))
    return sorted(out)


def sparsified_matching(objects, matcher, structure: str = "naive", result: SparsifierResult | None = None):
    """Run ``matcher(sub_objects) -> local pairs`` on the kept subset and combine."""
    res = result if result is not None else sparsify(objects, structure)
    sub = [objects[i] for i in res.kept]
    local = matcher(sub)
    pairs = [(res.kept[u], res.kept[v]) for u, v in local]
    return combine_matchings(pairs, res.residuals), res
