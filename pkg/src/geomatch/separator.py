"""Circle separators, vertex splitting and separator-tree construction.

A vertex split of v with bundle E_b adds a pendant 2-path v-a-b and moves
the edges in E_b from v to b; it raises the matching number by exactly one.
The tree builder separates the objects with a random circle, then splits
each separator vertex so that its X-edges and Y-edges live on copies that go
to the respective sides. Separator vertices end with degree at most 3 and
every vertex of the final graph has degree at most 4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._config import max_retries as _max_retries
from .errors import InvalidMatching, SeparatorNotFound
from .geometry import Disk, density_estimate
from .graph import IntersectionGraph, build_graph
from .tree import SeparatorTree, TreeNode, TreeParams

# ---------------------------------------------------------------------------
# Circle separators


@dataclass(frozen=True)
class Circle:
    cx: float
    cy: float
    radius: float


@dataclass(frozen=True)
class Separation:
    X: tuple[int, ...]
    Y: tuple[int, ...]
    Z: tuple[int, ...]

    def balance(self) -> float:
        n = len(self.X) + len(self.Y) + len(self.Z)
        return max(len(self.X) + len(self.Z), len(self.Y) + len(self.Z)) / max(n, 1)


def _shape_table(objects):
    n = len(objects)
    is_disk = np.zeros(n, dtype=bool)
    t = np.zeros((4, n))
    for i, o in enumerate(objects):
        if isinstance(o, Disk):
            is_disk[i] = True
            t[:, i] = (o.cx, o.cy, o.r, 0.0)
        else:
            t[:, i] = o.bbox
    return is_disk, t


def classify(objects, circle: Circle):
    """Label each object 0 (strictly inside), 1 (strictly outside) or 2.

    Objects touching or crossing the circle get label 2. Near-ties are
    pushed to label 2 so that labels 0 and 1 are always geometrically safe.
    """
    is_disk, t = _shape_table(objects)
    cx, cy, R = circle.cx, circle.cy, circle.radius
    near = np.empty(len(objects))
    far = np.empty(len(objects))
    d = np.hypot(t[0] - cx, t[1] - cy)
    near[is_disk] = (d - t[2])[is_disk]
    far[is_disk] = (d + t[2])[is_disk]
    bx = ~is_disk
    qx = np.clip(cx, t[0], t[2])
    qy = np.clip(cy, t[1], t[3])
    near[bx] = np.hypot(cx - qx, cy - qy)[bx]
    fx = np.maximum(np.abs(cx - t[0]), np.abs(cx - t[2]))
    fy = np.maximum(np.abs(cy - t[1]), np.abs(cy - t[3]))
    far[bx] = np.hypot(fx, fy)[bx]
    eps = 1e-9 * max(R, 1.0)
    lab = np.full(len(objects), 2, dtype=np.int8)
    lab[far < R - eps] = 0
    lab[near > R + eps] = 1
    return lab


def circle_separator(objects, rng, *, c: float = 4.0, alpha: float = 0.96,
                     rho_hat: float | None = None, max_retries: int | None = None,
                     leaf_cap: int | None = None, samples: int = 16):
    """Random circle separating the objects.

    Each attempt samples candidate centres among the anchors, takes the
    smallest radius enclosing ceil(n/20) anchors around one of them, scales
    it by a uniform factor in [1, 2], and classifies the objects. The attempt
    is accepted when at most c*sqrt(rho_hat*n) objects meet the circle and
    both closed sides hold at most alpha*n objects.

    Returns (circle, separation, attempts). Raises SeparatorNotFound when
    the retry budget runs out.
    """
    n = len(objects)
    if leaf_cap is not None and n <= leaf_cap:
        raise ValueError("instance is small enough to be a leaf; no separator needed")
    if n < 2:
        raise ValueError("need at least two objects")
    if rho_hat is None:
        rho_hat = density_estimate(objects)
    budget = _max_retries(200) if max_retries is None else max_retries
    anchors = np.array([o.anchor for o in objects])
    kth = math.ceil(n / 20)
    zcap = c * math.sqrt(rho_hat * n)
    for attempt in range(1, budget + 1):
        picks = rng.choice(n, size=min(samples, n), replace=False)
        best_r, best_c = math.inf, None
        for i in picks:
            d = np.hypot(anchors[:, 0] - anchors[i, 0], anchors[:, 1] - anchors[i, 1])
            r0 = float(np.partition(d, kth - 1)[kth - 1]) if kth > 0 else 0.0
            if r0 < best_r:
                best_r, best_c = r0, anchors[i]
        radius = max(best_r, 1e-9) * rng.uniform(1.0, 2.0)
        circle = Circle(float(best_c[0]), float(best_c[1]), float(radius))
        lab = classify(objects, circle)
        X = tuple(np.flatnonzero(lab == 0).tolist())
        Y = tuple(np.flatnonzero(lab == 1).tolist())
        Z = tuple(np.flatnonzero(lab == 2).tolist())
        sep = Separation(X, Y, Z)
        if len(Z) <= zcap and sep.balance() <= alpha:
            return circle, sep, attempt
    raise SeparatorNotFound(f"no separator for {n} objects after {budget} attempts")


def check_separation(g: IntersectionGraph, sep: Separation, vertices=None) -> int:
    """Number of edges of g (restricted to ``vertices``) joining X and Y."""
    side = {}
    for v in sep.X:
        side[v] = 0
    for v in sep.Y:
        side[v] = 1
    bad = 0
    for v in sep.X:
        for w in g.adj[v]:
            if side.get(w) == 1:
                bad += 1
    return bad


# ---------------------------------------------------------------------------
# Vertex splitting


@dataclass
class SplitGraph:
    """A vertex-split graph with enough provenance to undo the splits.

    ``origin[v]`` is the original vertex whose object v copies; ``role[v]``
    is 'orig', 'link' (middle of a pendant 2-path), 'copy' (its end, which
    received moved edges) or 'pad' (balance padding). ``k`` is how much the
    splits and padding raise the matching number.
    """

    graph: IntersectionGraph
    n_original: int
    origin: list[int]
    role: list[str]
    records: list[tuple]
    k: int


class _Builder:
    def __init__(self, g: IntersectionGraph):
        self.n0 = g.n
        self.nbrs = [set(a) for a in g.adj]
        self.origin = list(range(g.n))
        self.role = ["orig"] * g.n
        self.records: list[tuple] = []
        self.k = 0

    def new_vertex(self, origin: int, role: str) -> int:
        self.nbrs.append(set())
        self.origin.append(origin)
        self.role.append(role)
        return len(self.nbrs) - 1

    def split(self, v: int, bundle) -> tuple[int, int]:
        """Pendant 2-path v-a-b; move the edges v-u (u in bundle) to b."""
        a = self.new_vertex(self.origin[v], "link")
        b = self.new_vertex(self.origin[v], "copy")
        for u in bundle:
            self.nbrs[v].remove(u)
            self.nbrs[u].remove(v)
            self.nbrs[u].add(b)
            self.nbrs[b].add(u)
        self.nbrs[v].add(a)
        self.nbrs[a].update((v, b))
        self.nbrs[b].add(a)
        self.records.append(("split", v, a, b))
        self.k += 1
        return a, b

    def pad(self, anchor: int | None, length: int, origin: int) -> list[int]:
        """Attach an even path of ``length`` vertices (to ``anchor`` if given)."""
        assert length % 2 == 0 and length > 0
        path = [self.new_vertex(origin, "pad") for _ in range(length)]
        for x, y in zip(path, path[1:]):
            self.nbrs[x].add(y)
            self.nbrs[y].add(x)
        if anchor is not None:
            self.nbrs[anchor].add(path[0])
            self.nbrs[path[0]].add(anchor)
        self.records.append(("pad", anchor, tuple(path)))
        self.k += length // 2
        return path

    def freeze(self) -> SplitGraph:
        adj = tuple(tuple(sorted(s)) for s in self.nbrs)
        return SplitGraph(IntersectionGraph(adj, tuple(self.origin)), self.n0,
                          list(self.origin), list(self.role), list(self.records), self.k)


def _separate_vertices(b: _Builder, X, Y, Z):
    """Apply the separator gadget to every v in Z (see split_separator_vertices)."""
    xs, ys = set(X), set(Y)
    zstar: list[int] = []
    xcopies, ycopies = [], []
    links: dict[int, list[int]] = {}
    for v in sorted(Z):
        zstar.append(v)
        links[v] = []
        for side, copies in ((xs, xcopies), (ys, ycopies)):
            bundle = [u for u in b.nbrs[v] if u in side]
            if bundle:
                a, c = b.split(v, bundle)
                zstar.append(a)
                copies.append(c)
                links[v].append(a)
    for v in sorted(Z):
        if len(b.nbrs[v]) <= 3:
            continue
        # Remaining items (separator edges, edges leaving the piece) go down a
        # chain: v keeps its side links, some items and one chain link; each
        # chain holder keeps its incoming link, one item and the next link.
        protected = set(links[v])
        rest = sorted(b.nbrs[v] - protected)
        move = rest[2 - len(protected):]
        holder = v
        while True:
            a, c = b.split(holder, move)
            zstar.extend((a, c))
            if len(move) + 1 <= 3:
                break
            holder, move = c, move[1:]
    return zstar, sorted(xs | set(xcopies)), sorted(ys | set(ycopies))


def split_separator_vertices(g: IntersectionGraph, sep: Separation):
    """Split the separator vertices of ``sep`` (on a copy of g).

    Every v in Z hands its X-edges to a copy placed in X* and its Y-edges to
    a copy placed in Y*; the link vertices, v itself and any degree-reduction
    chain vertices form Z*. Returns (SplitGraph, Z*, X*, Y*).
    """
    b = _Builder(g)
    zstar, xstar, ystar = _separate_vertices(b, sep.X, sep.Y, sep.Z)
    return b.freeze(), sorted(zstar), xstar, ystar


def _reduce_leaf_degrees(b: _Builder, piece, limit: int = 4) -> list[int]:
    """Chain-split every piece vertex of degree above ``limit``."""
    created: list[int] = []
    for v in sorted(piece):
        if len(b.nbrs[v]) <= limit:
            continue
        items = sorted(b.nbrs[v])
        keep = items[:limit - 1]
        move = items[limit - 1:]
        holder = v
        while True:
            a, c = b.split(holder, move)
            created.extend((a, c))
            # c holds the link to a plus ``move``.
            if len(move) + 1 <= limit:
                break
            holder, move = c, move[limit - 2:]
    return created


# ---------------------------------------------------------------------------
# Separator tree


@dataclass
class SeparatorParams:
    c: float = 4.0
    alpha: float = 0.96
    leaf_factor: float = 8.0
    leaf_min: int = 64
    max_retries: int | None = None
    samples: int = 16

    def leaf_cap(self, rho_hat: float) -> int:
        return max(int(math.ceil(self.leaf_factor * rho_hat)), self.leaf_min)


@dataclass
class BuildStats:
    attempts: list[int] = field(default_factory=list)
    separator_sizes: list[tuple[int, int]] = field(default_factory=list)  # (|Z|, core n)
    pad_vertices: int = 0
    forced_leaves: int = 0  # pieces above the leaf cap that no circle could separate


def build_separator_tree(objects, params: SeparatorParams | None = None, rng=None,
                         graph: IntersectionGraph | None = None, rho_hat: float | None = None):
    """Vertex-split graph G' of the intersection graph and a separator tree for it.

    Returns (SplitGraph, SeparatorTree, BuildStats). Leaves hold at most
    ``leaf_cap`` pieces of the input (original objects or their copies); the
    degree-reduction vertices added at a leaf are counted separately.
    """
    params = params or SeparatorParams()
    rng = rng if rng is not None else np.random.default_rng(0)
    g = graph if graph is not None else build_graph(objects)
    if rho_hat is None:
        rho_hat = density_estimate(objects, g.adj) if objects else 1
    leaf_cap = params.leaf_cap(rho_hat)
    b = _Builder(g)
    stats = BuildStats()
    nodes: list[dict] = []
    leaf_core: dict[int, int] = {}

    def build(piece: list[int], parent: int) -> tuple[int, int]:
        """Returns (node id, subtree vertex count)."""
        t = len(nodes)
        nodes.append({"z": [], "parent": parent, "children": []})
        def leaf():
            created = _reduce_leaf_degrees(b, piece)
            nodes[t]["z"] = sorted(piece) + created
            leaf_core[t] = len(piece)
            return t, len(nodes[t]["z"])

        if len(piece) <= leaf_cap:
            return leaf()
        reps = [objects[b.origin[v]] for v in piece]
        try:
            _, sep, tries = circle_separator(reps, rng, c=params.c, alpha=params.alpha,
                                             rho_hat=rho_hat, max_retries=params.max_retries,
                                             samples=params.samples)
        except SeparatorNotFound:
            # Copies share their origin's geometry, so a small piece of stacked
            # copies may admit no balanced circle; keep it whole.
            stats.forced_leaves += 1
            return leaf()
        stats.attempts.append(tries)
        stats.separator_sizes.append((len(sep.Z), len(piece)))
        X = [piece[i] for i in sep.X]
        Y = [piece[i] for i in sep.Y]
        Z = [piece[i] for i in sep.Z]
        zstar, xstar, ystar = _separate_vertices(b, X, Y, Z)
        nodes[t]["z"] = list(zstar)
        sizes = []
        for side in (xstar, ystar):
            if side:
                c, sz = build(side, t)
                nodes[t]["children"].append(c)
                sizes.append(sz)
        total = len(nodes[t]["z"]) + sum(sizes)
        big = max(sizes, default=0)
        if big > params.alpha * total:
            # Pad the separator so no child exceeds alpha of the subtree.
            need = math.ceil(big / params.alpha - total)
            need += need % 2
            anchor = next((v for v in nodes[t]["z"] if len(b.nbrs[v]) <= 3), None)
            origin = b.origin[nodes[t]["z"][0]] if nodes[t]["z"] else b.origin[piece[0]]
            path = b.pad(anchor, need, origin)
            nodes[t]["z"].extend(path)
            stats.pad_vertices += need
            total += need
        return t, total

    build(list(range(g.n)), -1)
    sg = b.freeze()
    tree_nodes = [TreeNode(tuple(sorted(nd["z"])), nd["parent"], tuple(nd["children"])) for nd in nodes]
    tree = SeparatorTree(tree_nodes, 0, sg.graph.n, TreeParams(alpha=params.alpha, leaf_cap=leaf_cap))
    ratios = [len(tree.nodes[t].z) / math.sqrt(tree.subtree_sizes[t])
              for t in range(len(tree.nodes)) if tree.nodes[t].children]
    gamma = max(ratios, default=0.0)
    tree = SeparatorTree(tree.nodes, 0, sg.graph.n, TreeParams(
        gamma=gamma, beta=0.5, alpha=params.alpha, leaf_cap=leaf_cap,
        extra={"c": params.c, "rho_hat": rho_hat, "leaf_core": leaf_core}))
    return sg, tree, stats


def validate_tree(tree: SeparatorTree, g: IntersectionGraph) -> list[str]:
    """Structural check of the separator-tree properties; returns problems found."""
    problems = []
    owner = np.full(g.n, -1, dtype=np.int64)
    if tree.n != g.n:
        problems.append("tree and graph sizes differ")
        return problems
    for t, nd in enumerate(tree.nodes):
        for v in nd.z:
            if owner[v] >= 0:
                problems.append(f"vertex {v} in two nodes")
            owner[v] = t
    if np.any(owner < 0):
        problems.append("some vertices belong to no node")
        return problems
    sizes = tree.subtree_sizes
    p = tree.params
    leaf_core = p.extra.get("leaf_core", {})
    for t, nd in enumerate(tree.nodes):
        if nd.children:
            if len(nd.z) > p.gamma * math.sqrt(sizes[t]) + 1e-9:
                problems.append(f"node {t}: separator larger than gamma*sqrt|V_t|")
            for c in nd.children:
                if sizes[c] > p.alpha * sizes[t] + 1e-9:
                    problems.append(f"node {t}: child {c} exceeds alpha*|V_t|")
        else:
            core = leaf_core.get(t, leaf_core.get(str(t), len(nd.z)))
            if core > p.leaf_cap:
                problems.append(f"leaf {t}: {core} pieces exceed leaf_cap {p.leaf_cap}")
    # Separation: every edge joins ancestor-related nodes.
    for u, v in g.edges():
        if not tree.related(int(owner[u]), int(owner[v])):
            problems.append(f"edge ({u},{v}) crosses between sibling subtrees")
            break
    return problems


# ---------------------------------------------------------------------------
# Undoing splits


def unsplit_matching(pairs, sg: SplitGraph) -> list[tuple[int, int]]:
    """Map a matching of the split graph back to the original graph."""
    g = sg.graph
    mate: dict[int, int] = {}
    for u, v in pairs:
        if not g.has_edge(u, v):
            raise InvalidMatching(f"({u}, {v}) is not an edge of the split graph")
        if u in mate or v in mate:
            raise InvalidMatching(f"vertex covered twice by ({u}, {v})")
        mate[u], mate[v] = v, u

    def unmatch(x):
        y = mate.pop(x, None)
        if y is not None:
            mate.pop(y, None)
        return y

    for rec in reversed(sg.records):
        if rec[0] == "pad":
            for x in rec[2]:
                unmatch(x)
            continue
        _, v, a, b = rec
        if mate.get(a) == v:
            unmatch(a)
            u = unmatch(b)
            if u is not None:
                mate[v], mate[u] = u, v
        elif mate.get(a) == b:
            unmatch(a)
        else:
            unmatch(b)
    n0 = sg.n_original
    out = sorted((u, w) for u, w in mate.items() if u < w)
    assert all(w < n0 for _, w in out)
    return out
