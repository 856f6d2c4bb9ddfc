"""Exact maximum matching: Edmonds' blossom algorithm and a brute-force check."""

from __future__ import annotations

from collections import deque
from functools import lru_cache

from .errors import InvalidMatching, TooLarge


def normalize(pairs) -> list[tuple[int, int]]:
    return sorted((min(u, v), max(u, v)) for u, v in pairs)


def validate_matching(g, pairs) -> list[tuple[int, int]]:
    """Return the sorted pairs; raise InvalidMatching on a non-edge or reuse."""
    seen = set()
    for u, v in pairs:
        if u == v or not g.has_edge(u, v):
            raise InvalidMatching(f"({u}, {v}) is not an edge")
        if u in seen or v in seen:
            raise InvalidMatching(f"vertex covered twice by ({u}, {v})")
        seen.update((u, v))
    return normalize(pairs)


def is_valid_matching(g, pairs) -> bool:
    try:
        validate_matching(g, pairs)
    except InvalidMatching:
        return False
    return True


def blossom_maximum_matching(g) -> list[tuple[int, int]]:
    """Maximum matching by augmenting paths with blossom contraction, O(V^3).

    Starts from a greedy matching, then grows an alternating BFS tree from
    each exposed vertex, shrinking odd cycles through their base.
    """
    n = g.n
    adj = g.adj
    match = [-1] * n
    for u in range(n):
        if match[u] < 0:
            for v in adj[u]:
                if match[v] < 0:
                    match[u], match[v] = v, u
                    break

    def find_path(root):
        parent = [-1] * n
        base = list(range(n))
        used = [False] * n
        used[root] = True
        q = deque([root])

        def lca(a, b):
            seen = [False] * n
            while True:
                a = base[a]
                seen[a] = True
                if match[a] < 0:
                    break
                a = parent[match[a]]
            while True:
                b = base[b]
                if seen[b]:
                    return b
                b = parent[match[b]]

        def mark_path(v, b, child, blossom):
            while base[v] != b:
                blossom[base[v]] = blossom[base[match[v]]] = True
                parent[v] = child
                child = match[v]
                v = parent[match[v]]

        while q:
            v = q.popleft()
            for to in adj[v]:
                if base[v] == base[to] or match[v] == to:
                    continue
                if to == root or (match[to] >= 0 and parent[match[to]] >= 0):
                    cur = lca(v, to)
                    blossom = [False] * n
                    mark_path(v, cur, to, blossom)
                    mark_path(to, cur, v, blossom)
                    for i in range(n):
                        if blossom[base[i]]:
                            base[i] = cur
                            if not used[i]:
                                used[i] = True
                                q.append(i)
                elif parent[to] < 0:
                    parent[to] = v
                    if match[to] < 0:
                        return parent, to
                    used[match[to]] = True
                    q.append(match[to])
        return parent, -1

    for root in range(n):
        if match[root] >= 0 or not adj[root]:
            continue
        parent, end = find_path(root)
        while end >= 0:
            pv = parent[end]
            nxt = match[pv]
            match[end], match[pv] = pv, end
            end = nxt
    return sorted((u, match[u]) for u in range(n) if match[u] > u)


def exhaustive_matching_size(g, limit: int = 16) -> int:
    """Exact matching number by memoised search over vertex subsets."""
    n = g.n
    if n > limit:
        raise TooLarge(f"{n} vertices exceeds the exhaustive limit {limit}")
    nbmask = [sum(1 << w for w in g.adj[v]) for v in range(n)]

    @lru_cache(maxsize=None)
    def best(mask: int) -> int:
        if mask == 0:
            return 0
        v = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << v)
        out = best(rest)  # v stays exposed
        cand = nbmask[v] & rest
        while cand:
            w = (cand & -cand).bit_length() - 1
            cand &= cand - 1
            out = max(out, 1 + best(rest & ~(1 << w)))
        return out

    return best((1 << n) - 1)


def has_augmenting_path(g, pairs, budget: int = 2_000_000) -> bool:
    """Search for an augmenting path over simple alternating paths.

    A Berge-condition spot check for small sparse graphs: DFS from every
    exposed vertex, raising TooLarge once ``budget`` steps are spent.
    """
    match = {}
    for u, v in pairs:
        match[u], match[v] = v, u
    exposed = [v for v in range(g.n) if v not in match]
    exposed_set = set(exposed)
    steps = 0

    def dfs(v, on_path):
        nonlocal steps
        for w in g.adj[v]:
            steps += 1
            if steps > budget:
                raise TooLarge("augmenting-path search exceeded its budget")
            if w in on_path:
                continue
            if w in exposed_set:
                return True
            m = match[w]
            if m in on_path:
                continue
            on_path.update((w, m))
            if dfs(m, on_path):
                return True
            on_path.difference_update((w, m))
        return False

    return any(dfs(s, {s}) for s in exposed)
