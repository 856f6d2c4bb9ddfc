"""Nested-dissection (multifrontal) Gaussian elimination over Z_p.

The matrix is given row-wise as a list of ``{column: value}`` dicts whose
pattern is symmetric up to values (an entry (i, j) may be stored even if
(j, i) is zero). Elimination follows a separator tree: for each node t in
post-order, a dense front over Z_t + B_t is assembled from the original
entries and the children's update matrices, its Z_t rows are eliminated in
place, and the trailing block is handed to the parent. B_t is the set of
vertices of proper ancestors adjacent to V_t.

Indices listed in ``extra`` belong to no tree node. They behave as a virtual
root above the tree and are never eliminated; the Schur complement on them
is returned.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import InconsistentOrder, RankMismatch, ZeroPivot
from .tree import SeparatorTree


@dataclass
class EliminationResult:
    schur: np.ndarray  # Schur complement on ``extra`` (in the given order)
    extra: tuple[int, ...]
    eliminated: np.ndarray  # bool per index: pivot used
    deleted: np.ndarray  # bool per index: zero pivot skipped (null row/col)
    L: dict | None = None  # (row, col) -> value, strictly lower part
    U: dict | None = None  # (row, col) -> value, including diagonal
    fronts: dict = field(default_factory=dict)  # node -> tuple of front indices
    locality_violations: int = 0


def dense_to_rows(A: np.ndarray) -> list[dict]:
    rows = []
    for i in range(A.shape[0]):
        nz = np.flatnonzero(A[i])
        rows.append({int(j): int(A[i, j]) for j in nz})
    return rows


def _pattern(rows, size):
    """Symmetric adjacency sets of the nonzero pattern (diagonal excluded)."""
    adj = [set() for _ in range(size)]
    for i, r in enumerate(rows):
        for j, v in r.items():
            if v and j != i:
                adj[i].add(j)
                adj[j].add(i)
    return adj


def check_locality(tree: SeparatorTree, adj, extra=()) -> int:
    """Number of nonzeros joining tree nodes that are not ancestor-related."""
    node_of = tree.node_of
    extra = set(extra)
    bad = 0
    for i in range(tree.n):
        if i in extra:
            continue
        ti = int(node_of[i])
        for j in adj[i]:
            if j < i or j in extra:
                continue
            if not tree.related(ti, int(node_of[j])):
                bad += 1
    return bad


def validate_order(tree: SeparatorTree, order) -> np.ndarray:
    """Position array for ``order``; raises InconsistentOrder if it is not a
    permutation or places some ancestor row before a descendant row."""
    order = np.asarray(order, dtype=np.int64)
    if sorted(order.tolist()) != list(range(tree.n)):
        raise InconsistentOrder("order is not a permutation of the tree's vertices")
    pos = np.empty(tree.n, dtype=np.int64)
    pos[order] = np.arange(tree.n)
    hi = {}
    for t in tree.postorder:
        nd = tree.nodes[t]
        sub = [pos[v] for v in nd.z] + [hi[c] for c in nd.children if hi[c] is not None]
        hi[t] = max(sub) if sub else None
        if nd.z:
            lo_here = min(pos[v] for v in nd.z)
            for c in nd.children:
                if hi[c] is not None and hi[c] > lo_here:
                    raise InconsistentOrder(f"node {c} has rows after its ancestor {t}")
    return pos


def eliminate_tree(rows, tree: SeparatorTree, p: int, *, extra=(), pos=None,
                   skip_zero: bool = False, record: bool = False,
                   check: bool = False) -> EliminationResult:
    """Multifrontal elimination of the tree-owned indices.

    ``rows`` has one dict per index in [0, tree.n + len(extra)) style global
    numbering; tree vertices are 0..tree.n-1 and extra indices are whatever
    the caller lists (they must not be owned by a tree node). ``pos`` fixes
    the elimination order inside each z-set (default: ascending index).

    With ``skip_zero`` a zero pivot whose remaining row and column are null
    is skipped (the index is reported as deleted); a zero pivot with a
    non-null row or column raises RankMismatch. Without it any zero pivot
    raises ZeroPivot.
    """
    size = len(rows)
    extra = tuple(int(e) for e in extra)
    adj = _pattern(rows, size)
    node_of = tree.node_of
    nn = len(tree.nodes)
    rank_of = np.full(size, nn, dtype=np.int64)  # extras rank above everything
    pos_arr, _ = tree._intervals
    for v in range(tree.n):
        rank_of[v] = pos_arr[node_of[v]]
    extra_set = set(extra)
    eliminated = np.zeros(size, dtype=bool)
    deleted = np.zeros(size, dtype=bool)
    L = {} if record else None
    U = {} if record else None
    updates: dict[int, tuple[list[int], np.ndarray]] = {}
    fronts = {}
    violations = 0
    if check:
        violations = check_locality(tree, adj, extra)

    def assemble(idx, zcount, child_ids):
        k = len(idx)
        where = {v: a for a, v in enumerate(idx)}
        F = np.zeros((k, k), dtype=np.int64)
        zset = idx[:zcount]
        for a, i in enumerate(zset):
            for j, val in rows[i].items():
                b = where.get(j)
                if b is not None:
                    F[a, b] = val % p
        for i in idx[zcount:]:
            a = where[i]
            r = rows[i]
            for b, j in enumerate(zset):
                val = r.get(j)
                if val:
                    F[a, b] = val % p
        for c in child_ids:
            cidx, cu = updates.pop(c)
            sel = np.fromiter((where[v] for v in cidx), dtype=np.int64, count=len(cidx))
            F[np.ix_(sel, sel)] = kernels.addmod(F[np.ix_(sel, sel)], cu, p)
        return F

    for t in tree.postorder:
        nd = tree.nodes[t]
        z = list(nd.z)
        if pos is not None:
            z.sort(key=lambda v: pos[v])
        else:
            z.sort()
        zs = set(z)
        b = set()
        for v in z:
            for w in adj[v]:
                if w in zs:
                    continue
                if w in extra_set or (tree.is_ancestor(int(node_of[w]), t) and node_of[w] != t):
                    b.add(w)
                elif not tree.is_ancestor(t, int(node_of[w])):
                    raise InconsistentOrder(f"entry ({v},{w}) joins unrelated tree nodes")
        for c in nd.children:
            if c in updates:
                b.update(w for w in updates[c][0] if w not in zs)
        bl = sorted(b, key=lambda w: (rank_of[w], w))
        idx = z + bl
        fronts[t] = tuple(idx)
        F = assemble(idx, len(z), [c for c in nd.children if c in updates])
        if z:
            status, code, at = kernels.eliminate_leading(F, len(z), p, skip_zero)
            if code == kernels.ZERO_PIVOT:
                raise ZeroPivot(z[at])
            if code == kernels.NONNULL_ZERO_PIVOT:
                raise RankMismatch(z[at])
            for a, v in enumerate(z):
                if status[a]:
                    eliminated[v] = True
                else:
                    deleted[v] = True
            if record:
                k = len(z)
                for a in range(k):
                    if not status[a]:
                        continue
                    ua = np.flatnonzero(F[a, a:]) + a
                    for c in ua:
                        U[(idx[a], idx[c])] = int(F[a, c])
                    la = np.flatnonzero(F[a + 1:, a]) + a + 1
                    for r in la:
                        L[(idx[r], idx[a])] = int(F[r, a])
        if bl:
            updates[t] = (bl, F[len(z):, len(z):].copy())

    # Virtual root over the extra indices.
    ex = list(extra)
    where = {v: a for a, v in enumerate(ex)}
    S = np.zeros((len(ex), len(ex)), dtype=np.int64)
    for a, i in enumerate(ex):
        for j, val in rows[i].items():
            bb = where.get(j)
            if bb is not None:
                S[a, bb] = val % p
    for c, (cidx, cu) in list(updates.items()):
        if any(v not in where for v in cidx):
            raise InconsistentOrder(f"update of node {c} escapes the root")
        sel = np.fromiter((where[v] for v in cidx), dtype=np.int64, count=len(cidx))
        S[np.ix_(sel, sel)] = kernels.addmod(S[np.ix_(sel, sel)], cu, p)
    return EliminationResult(S, tuple(ex), eliminated, deleted, L, U, fronts, violations)


def boundary_sets(tree: SeparatorTree, adj) -> dict[int, set]:
    """B_t by definition: proper-ancestor vertices adjacent to some vertex of V_t."""
    node_of = tree.node_of
    out = {}
    for t in range(len(tree.nodes)):
        vt = tree.subtree_vertices(t)
        bt = set()
        for v in vt:
            for w in adj[v]:
                if w >= tree.n:
                    continue
                s = int(node_of[w])
                if s != t and tree.is_ancestor(s, t):
                    bt.add(w)
        out[t] = bt
    return out


def locality_violations(tree: SeparatorTree, rows, fronts) -> int:
    """Count front indices falling outside Z_t + B_t (B_t computed directly)."""
    adj = _pattern(rows, len(rows))
    bsets = boundary_sets(tree, adj)
    bad = 0
    for t, idx in fronts.items():
        allowed = set(tree.nodes[t].z) | bsets[t]
        bad += sum(1 for v in idx if v not in allowed)
    return bad


@dataclass
class NDFactors:
    """L, U of the matrix permuted by ``order`` (P A P^T = L U)."""

    L: np.ndarray
    U: np.ndarray
    order: np.ndarray
    rank_prefix: int
    fronts: dict
    locality_violations: int


def nested_dissection_lu(A, tree: SeparatorTree, order, p: int) -> NDFactors:
    """No-pivot LU of A scheduled by ``tree``, returned in ``order``'s numbering.

    Raises InconsistentOrder when ``order`` or the sparsity pattern does not
    respect the tree, and ZeroPivot on a vanishing pivot.
    """
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[0]
    if n != tree.n:
        raise InconsistentOrder("matrix and tree sizes differ")
    pos = validate_order(tree, order)
    rows = dense_to_rows(A)
    if check_locality(tree, _pattern(rows, n)):
        raise InconsistentOrder("sparsity pattern joins unrelated tree nodes")
    res = eliminate_tree(rows, tree, p, pos=pos, record=True)
    L = np.eye(n, dtype=np.int64)
    U = np.zeros((n, n), dtype=np.int64)
    for (i, j), v in res.L.items():
        L[pos[i], pos[j]] = v
    for (i, j), v in res.U.items():
        U[pos[i], pos[j]] = v
    viol = locality_violations(tree, rows, res.fronts)
    return NDFactors(L, U, np.asarray(order, dtype=np.int64), n, res.fronts, viol)
