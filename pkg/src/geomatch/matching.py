"""Algebraic maximum matching over Z_p guided by a separator tree.

Pipeline: build the intersection graph, split it into a bounded-degree graph
G' with a separator tree, draw a random Tutte matrix A, find a vertex set W
on which G' has a perfect matching (zero pivots of B = A A^T mark vertices
outside W), then match top-down: at each tree node compute the block of the
inverse Tutte matrix on N = Z_t plus neighbours, and commit matching edges
that remain in some perfect matching until Z_t is covered.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .dissection import eliminate_tree
from .errors import InconsistentOrder, RankMismatch, RetryExhausted, Singular, ZeroPivot
from .field import FieldParams, gauss_rank, prime_for_size
from .graph import IntersectionGraph, build_graph, induced_subgraph
from .oracle import validate_matching
from .separator import SeparatorParams, build_separator_tree, unsplit_matching
from .tree import SeparatorTree, single_node_tree, square_tree


@dataclass
class TutteMatrix:
    """Random substitution of the Tutte matrix, stored row-wise (sparse)."""

    rows: list[dict]
    p: int
    edge_vars: dict
    seed: object

    @property
    def m(self) -> int:
        return len(self.rows)

    def dense(self) -> np.ndarray:
        A = np.zeros((self.m, self.m), dtype=np.int64)
        for i, r in enumerate(self.rows):
            for j, v in r.items():
                A[i, j] = v
        return A


def _rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def tutte_matrix(g: IntersectionGraph, seed, p: int | None = None) -> TutteMatrix:
    """A[i][j] = x_ij and A[j][i] = -x_ij (i < j) with x_ij uniform in Z_p."""
    if p is None:
        p = prime_for_size(g.n).p
    rng = _rng(seed)
    edges = list(g.edges())
    vals = rng.integers(0, p, size=len(edges), dtype=np.int64) if edges else []
    rows = [dict() for _ in range(g.n)]
    edge_vars = {}
    for (u, v), x in zip(edges, vals):
        x = int(x)
        edge_vars[(u, v)] = x
        if x:
            rows[u][v] = x
            rows[v][u] = (p - x) % p
    return TutteMatrix(rows, p, edge_vars, seed)


def matching_size(g: IntersectionGraph, seed, p: int | None = None) -> int:
    """rank(Tutte)/2; never exceeds the true matching number."""
    if g.n == 0:
        return 0
    t = tutte_matrix(g, seed, p)
    return gauss_rank(t.dense(), t.p) // 2


def gram_rows(rows: list[dict], p: int) -> list[dict]:
    """Rows of B = A A^T computed from the sparse rows of A."""
    cols: dict[int, list[tuple[int, int]]] = {}
    for i, r in enumerate(rows):
        for k, v in r.items():
            cols.setdefault(k, []).append((i, v))
    out = [dict() for _ in rows]
    for entries in cols.values():
        for i, a in entries:
            oi = out[i]
            for j, b in entries:
                oi[j] = oi.get(j, 0) + a * b
    return [{j: v % p for j, v in r.items() if v % p} for r in out]


def _eliminate_with_fallback(rows, tree, p, **kw):
    try:
        return eliminate_tree(rows, tree, p, **kw), False
    except InconsistentOrder:
        # The transferred tree did not fit the pattern; eliminate densely.
        return eliminate_tree(rows, single_node_tree(tree.n), p, **kw), True


def extract_matchable_subset(g: IntersectionGraph, tree: SeparatorTree | None, seed,
                             p: int | None = None, tutte: TutteMatrix | None = None) -> list[int]:
    """Vertices W such that G[W] has a perfect matching that is maximum in G.

    Eliminates B = A A^T along the squared tree; a zero pivot with a null
    remaining row and column drops its vertex. RankMismatch signals an
    unlucky draw (zero pivot, non-null row).
    """
    if g.n == 0:
        return []
    t = tutte if tutte is not None else tutte_matrix(g, seed, p)
    tree = tree if tree is not None else single_node_tree(g.n)
    B = gram_rows(t.rows, t.p)
    res, _ = _eliminate_with_fallback(B, square_tree(tree, g.adj), t.p, skip_zero=True)
    return np.flatnonzero(res.eliminated).tolist()


def corner_inverse(A_rows: list[dict], N, tree: SeparatorTree | None, p: int,
                   adj=None) -> np.ndarray:
    """The N x N block of A^-1 for a nonsingular skew-symmetric A.

    Uses A^-1 = -A B^-1 with B = A A^T: the matrix [[B, E_N], [A_N, 0]]
    (E_N selects the columns N, A_N is the rows N of A) has Schur complement
    -A_N B^-1 E_N on its last |N| indices, which is exactly the block. The
    B part is eliminated along the squared tree; the |N| extra indices sit
    above the root.
    """
    m = len(A_rows)
    N = [int(v) for v in N]
    if adj is None:
        adj = [tuple(r) for r in A_rows]
    tree = tree if tree is not None else single_node_tree(m)
    B = gram_rows(A_rows, p)
    rows = [dict(r) for r in B]
    for a, v in enumerate(N):
        rows[v][m + a] = 1
        rows.append(dict(A_rows[v]))
    try:
        res, _ = _eliminate_with_fallback(rows, square_tree(tree, adj), p, extra=range(m, m + len(N)))
    except ZeroPivot as e:
        raise Singular(f"zero pivot at {e.index} while inverting") from e
    return res.schur


def allowed_edge(C: np.ndarray, i: int, j: int) -> bool:
    """Edge (i, j) lies in some perfect matching iff (A^-1)[j][i] != 0 (w.h.p.)."""
    return C[j, i] != 0


def maximal_allowed_submatching(candidates, C: np.ndarray, p: int):
    """Keep candidate edges (local indices into C) greedily while they stay allowed.

    After keeping (u, v), C becomes the inverse block of the graph without u
    and v (Schur complement of the 2x2 block), updated in place. Returns the
    kept edges.
    """
    kept = []
    for u, v in candidates:
        if C[v, u] != 0 and kernels.schur2(C, u, v, p):
            kept.append((u, v))
    return kept


@dataclass
class MatchInfo:
    attempts: int = 0
    node_iterations: list[int] = field(default_factory=list)
    w_size: int = 0
    split_vertices: int = 0
    k: int = 0
    p: int = 0
    fallbacks: int = 0
    failures: list[str] = field(default_factory=list)


class _IterationCap(Exception):
    pass


def _greedy_candidates(H, alive_n, discarded, uncovered_z, C, loc):
    """Maximal matching of H[alive_n] minus discarded edges, Z-first order."""
    edges = []
    for u in alive_n:
        for v in H.adj[u]:
            if u < v and v in alive_n and (u, v) not in discarded:
                touches = u in uncovered_z or v in uncovered_z
                allowed = C[loc[v], loc[u]] != 0
                edges.append(((not touches, not allowed, u, v), u, v))
    edges.sort()
    used, out = set(), []
    for _, u, v in edges:
        if u not in used and v not in used:
            used.update((u, v))
            out.append((u, v))
    return out


def _match_node(H: IntersectionGraph, tree: SeparatorTree, Z, rng, p, cap, info):
    """Commit edges of H covering every vertex of Z, all inside one perfect matching."""
    t = tutte_matrix(H, rng, p)
    zset = set(Z)
    nset = set(zset)
    for z in Z:
        nset.update(H.adj[z])
    N = sorted(nset)
    loc = {v: a for a, v in enumerate(N)}
    C = corner_inverse(t.rows, N, tree, p, adj=H.adj)
    alive = set(N)
    discarded = set()
    committed = []
    for it in range(1, cap + 1):
        uncovered = zset & alive
        if not uncovered:
            info.node_iterations.append(it - 1)
            return committed
        cand = _greedy_candidates(H, alive, discarded, uncovered, C, loc)
        if not cand:
            raise Singular("separator vertex has no remaining partner")
        kept = maximal_allowed_submatching([(loc[u], loc[v]) for u, v in cand], C, p)
        keep_set = {(N[a], N[b]) for a, b in kept}
        for u, v in cand:
            if (u, v) in keep_set:
                committed.append((u, v))
                alive.discard(u)
                alive.discard(v)
            else:
                discarded.add((u, v))
    if zset & alive:
        raise _IterationCap()
    info.node_iterations.append(cap)
    return committed


def match_perfect(g: IntersectionGraph, tree: SeparatorTree, rng, p: int,
                  cap: int = 16, info: MatchInfo | None = None):
    """Perfect matching of g (assumed to exist) by top-down separator recursion."""
    info = info or MatchInfo()
    pairs = []
    alive = np.ones(g.n, dtype=bool)

    def visit(t: int):
        verts = [v for v in tree.subtree_vertices(t) if alive[v]]
        if not verts:
            return
        nd = tree.nodes[t]
        Z = [v for v in nd.z if alive[v]] if nd.children else verts
        if Z:
            H, ids = induced_subgraph(g, verts)
            local = {int(v): i for i, v in enumerate(ids)}
            sub, _ = tree.restrict(verts, root=t)
            got = _match_node(H, sub, [local[v] for v in Z], rng, p, cap, info)
            for u, v in got:
                gu, gv = int(ids[u]), int(ids[v])
                pairs.append((gu, gv))
                alive[gu] = alive[gv] = False
        for c in nd.children:
            visit(c)

    visit(tree.root)
    return pairs


def algebraic_maximum_matching(objects=None, seed=0, *, graph: IntersectionGraph | None = None,
                               params: SeparatorParams | None = None, restarts: int | None = None,
                               cap: int = 16, return_info: bool = False):
    """Maximum matching (w.h.p.) of the intersection graph of ``objects``.

    With only ``graph`` given (no geometry) a single-node separator tree is
    used. Randomness failures (zero pivots, a stuck node) trigger up to
    ``restarts`` fresh draws before RetryExhausted is raised. The result is
    always a valid matching.
    """
    from ._config import max_retries

    restarts = max_retries(3) if restarts is None else restarts
    g = graph if graph is not None else build_graph(objects)
    ss = np.random.SeedSequence(seed)
    tree_seed, *draw_seeds = ss.spawn(restarts + 2)
    info = MatchInfo()
    if objects is not None and len(objects):
        sg, tree, _ = build_separator_tree(objects, params, np.random.default_rng(tree_seed), graph=g)
    else:
        from .separator import _Builder

        sg = _Builder(g).freeze()
        tree = single_node_tree(g.n)
    gp = sg.graph
    info.split_vertices, info.k = gp.n, sg.k
    fp: FieldParams = prime_for_size(max(gp.n, 1))
    info.p = fp.p
    for attempt in range(restarts + 1):
        info.attempts = attempt + 1
        rng = np.random.default_rng(draw_seeds[attempt])
        try:
            W = extract_matchable_subset(gp, tree, rng, fp.p)
            info.w_size = len(W)
            H, ids = induced_subgraph(gp, W)
            sub, _ = tree.restrict(ids)
            local = match_perfect(H, sub, rng, fp.p, cap, info)
            split_pairs = [(int(ids[u]), int(ids[v])) for u, v in local]
            pairs = unsplit_matching(split_pairs, sg)
            pairs = validate_matching(g, pairs)
            return (pairs, info) if return_info else pairs
        except (RankMismatch, Singular, ZeroPivot, _IterationCap) as e:
            info.failures.append(type(e).__name__)
            continue
    raise RetryExhausted(f"all {restarts + 1} attempts failed: {info.failures}")
