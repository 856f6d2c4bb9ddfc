"""Separator trees: rooted trees of disjoint vertex sets driving elimination."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np


@dataclass(frozen=True)
class TreeNode:
    z: tuple[int, ...]
    parent: int
    children: tuple[int, ...] = ()

    @property
    def is_leaf(self) -> bool:
        return not self.children


@dataclass(frozen=True)
class TreeParams:
    gamma: float = 0.0
    beta: float = 0.5
    alpha: float = 0.96
    leaf_cap: int = 64
    extra: dict = field(default_factory=dict, compare=False)


class SeparatorTree:
    """Nodes with vertex sets ``z``; node ``root`` has parent -1.

    Every vertex in [0, n) belongs to the ``z`` of exactly one node. The
    vertex set V_t of a node is the union of ``z`` over its subtree.
    """

    def __init__(self, nodes, root: int, n: int, params: TreeParams | None = None):
        self.nodes = tuple(nodes)
        self.root = root
        self.n = n
        self.params = params or TreeParams()

    def __len__(self):
        return len(self.nodes)

    def __repr__(self):
        return f"SeparatorTree(nodes={len(self.nodes)}, n={self.n}, height={self.height})"

    @cached_property
    def node_of(self) -> np.ndarray:
        """Node index owning each vertex (-1 if some vertex is unowned)."""
        owner = np.full(self.n, -1, dtype=np.int64)
        for t, node in enumerate(self.nodes):
            for v in node.z:
                owner[v] = t
        return owner

    @cached_property
    def postorder(self) -> tuple[int, ...]:
        out, stack = [], [(self.root, False)]
        while stack:
            t, done = stack.pop()
            if done:
                out.append(t)
                continue
            stack.append((t, True))
            for c in reversed(self.nodes[t].children):
                stack.append((c, False))
        return tuple(out)

    @cached_property
    def preorder(self) -> tuple[int, ...]:
        out, stack = [], [self.root]
        while stack:
            t = stack.pop()
            out.append(t)
            stack.extend(reversed(self.nodes[t].children))
        return tuple(out)

    @cached_property
    def _intervals(self):
        # Post-order position of each node and of the first node of its subtree.
        pos = np.empty(len(self.nodes), dtype=np.int64)
        first = np.empty(len(self.nodes), dtype=np.int64)
        for i, t in enumerate(self.postorder):
            pos[t] = i
            kids = self.nodes[t].children
            first[t] = min((first[c] for c in kids), default=i)
        return pos, first

    def is_ancestor(self, a: int, b: int) -> bool:
        """True when a is b or a proper ancestor of b."""
        pos, first = self._intervals
        return first[a] <= pos[b] <= pos[a]

    def related(self, a: int, b: int) -> bool:
        return self.is_ancestor(a, b) or self.is_ancestor(b, a)

    @cached_property
    def depth_of(self) -> np.ndarray:
        d = np.zeros(len(self.nodes), dtype=np.int64)
        for t in self.preorder:
            par = self.nodes[t].parent
            d[t] = 0 if par < 0 else d[par] + 1
        return d

    @property
    def height(self) -> int:
        return int(self.depth_of.max()) if self.nodes else 0

    def subtree_vertices(self, t: int) -> list[int]:
        out, stack = [], [t]
        while stack:
            s = stack.pop()
            out.extend(self.nodes[s].z)
            stack.extend(self.nodes[s].children)
        return out

    @cached_property
    def subtree_sizes(self) -> np.ndarray:
        size = np.zeros(len(self.nodes), dtype=np.int64)
        for t in self.postorder:
            size[t] = len(self.nodes[t].z) + sum(size[c] for c in self.nodes[t].children)
        return size

    def leaves(self) -> list[int]:
        return [t for t in self.postorder if self.nodes[t].is_leaf]

    def restrict(self, keep, root: int | None = None):
        """Tree over the vertices ``keep`` (relabelled 0..len(keep)-1).

        Only the subtree of ``root`` (default: the whole tree) is kept. Node
        shape is preserved, so some z-sets may become empty. Returns the new
        tree and the array mapping new vertex ids to old ones.
        """
        keep = np.asarray(sorted(set(int(v) for v in keep)), dtype=np.int64)
        local = {int(v): i for i, v in enumerate(keep)}
        start = self.root if root is None else root
        order = []
        stack = [start]
        while stack:
            t = stack.pop()
            order.append(t)
            stack.extend(self.nodes[t].children)
        new_id = {t: i for i, t in enumerate(order)}
        nodes = []
        for t in order:
            nd = self.nodes[t]
            z = tuple(local[v] for v in nd.z if v in local)
            par = new_id.get(nd.parent, -1) if t != start else -1
            nodes.append(TreeNode(z=z, parent=par, children=tuple(new_id[c] for c in nd.children)))
        sub = SeparatorTree(nodes, 0, len(keep), self.params)
        if np.any(sub.node_of < 0):
            raise ValueError("kept vertices outside the chosen subtree")
        return sub, keep

    def to_dict(self) -> dict:
        p = self.params
        return {
            "n": self.n,
            "root": self.root,
            "params": {"gamma": p.gamma, "beta": p.beta, "alpha": p.alpha, "leaf_cap": p.leaf_cap, **p.extra},
            "nodes": [{"z": list(nd.z), "parent": nd.parent, "children": list(nd.children)} for nd in self.nodes],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "SeparatorTree":
        raw = dict(d.get("params", {}))
        known = {k: raw.pop(k) for k in ("gamma", "beta", "alpha", "leaf_cap") if k in raw}
        nodes = [TreeNode(tuple(x["z"]), x["parent"], tuple(x["children"])) for x in d["nodes"]]
        return cls(nodes, d["root"], d["n"], TreeParams(**known, extra=raw))


def single_node_tree(n: int) -> SeparatorTree:
    return SeparatorTree([TreeNode(tuple(range(n)), -1, ())], 0, n)


def post_order_permutation(tree: SeparatorTree) -> np.ndarray:
    """Vertex order listing each z-set contiguously, descendants first."""
    out = []
    for t in tree.postorder:
        out.extend(sorted(tree.nodes[t].z))
    return np.asarray(out, dtype=np.int64)


def square_tree(tree: SeparatorTree, adj) -> SeparatorTree:
    """Separator tree for the square of the graph ``adj``.

    Processing top-down, each node's set grows by its neighbours inside V_t
    that are not yet claimed by an ancestor; this separates the children in
    the squared graph since any length-two path between them must pass
    through Z_t or one of its neighbours. Leaves absorb everything left.
    """
    claimed = np.zeros(tree.n, dtype=bool)
    node_of = tree.node_of
    new_z: dict[int, list[int]] = {}
    for t in tree.preorder:
        nd = tree.nodes[t]
        if nd.is_leaf:
            continue
        zs = [v for v in nd.z if not claimed[v]]
        for v in nd.z:
            for w in adj[v]:
                if not claimed[w] and tree.is_ancestor(t, int(node_of[w])):
                    zs.append(int(w))
        zs = sorted(set(zs))
        claimed[zs] = True
        new_z[t] = zs
    for t in tree.preorder:
        if tree.nodes[t].is_leaf:
            new_z[t] = [v for v in tree.subtree_vertices(t) if not claimed[v]]
            claimed[new_z[t]] = True
    nodes = [TreeNode(tuple(new_z[t]), nd.parent, nd.children) for t, nd in enumerate(tree.nodes)]
    return SeparatorTree(nodes, tree.root, tree.n, tree.params)
