"""Deletion-only query structures over a cluster of objects.

Both structures store an ordered family V_0 .. V_{m-1} and answer: the
smallest alive index i (optionally with i >= a) such that V_i intersects a
query object. ``delete`` marks an index dead; ``rollback`` revives
everything deleted since construction. Answers are identical between the two
implementations, which is what the model-based tests check.
"""

from __future__ import annotations

from ..errors import StructureMismatch
from ..geometry import Disk, intersects
from .envelope import build_envelope, merge

SLACK = 1e-7  # pruning tolerance in the envelope test; leaves are checked exactly


class NaiveQueryStructure:
    """Linear scan in index order."""

    name = "naive"

    def __init__(self, objects):
        self.objects = list(objects)
        self.alive = [True] * len(self.objects)
        self.log: list[int] = []

    def __len__(self):
        return len(self.objects)

    def query_from(self, obj, a: int = 0):
        for i in range(max(a, 0), len(self.objects)):
            if self.alive[i] and intersects(obj, self.objects[i]):
                return i
        return None

    def query(self, obj):
        return self.query_from(obj, 0)

    def delete(self, i: int):
        if self.alive[i]:
            self.alive[i] = False
            self.log.append(i)

    def rollback(self):
        while self.log:
            self.alive[self.log.pop()] = True


class UnitDiskQueryStructure:
    """Segment tree over indices for unit disks sharing a pierce point q.

    A unit disk with centre u meets V_i iff u lies in the radius-2 disk W_i
    around V_i's centre. Every W_i contains q strictly, so each tree node
    stores the star-shaped envelope of the union of its W_i. A query walks
    the tree left to right, pruning nodes whose envelope misses u or whose
    range holds no alive index, and confirms hits exactly at the leaves.
    """

    name = "unitdisk"

    def __init__(self, objects, q=None):
        self.objects = list(objects)
        for o in self.objects:
            if not (isinstance(o, Disk) and o.r == 1.0):
                raise StructureMismatch("the unit-disk structure stores unit disks only")
        m = len(self.objects)
        self.m = m
        self.alive = [True] * m
        self.log: list[int] = []
        if m == 0:
            return
        if q is None:
            from ..geometry import lowest_pierce_point

            q = lowest_pierce_point(self.objects[0])
        self.q = (float(q[0]), float(q[1]))
        for o in self.objects:
            if (o.cx - self.q[0]) ** 2 + (o.cy - self.q[1]) ** 2 > 1.0:
                raise StructureMismatch(f"{o} does not contain the common point {self.q}")
        self.table = [(o.cx, o.cy, 2.0) for o in self.objects]
        size = 1
        while size < m:
            size *= 2
        self.size = size
        self.env = [None] * (2 * size)
        self.count = [0] * (2 * size)
        for i in range(m):
            self.env[size + i] = build_envelope(self.table, [i], self.q)
            self.count[size + i] = 1
        for v in range(size - 1, 0, -1):
            l, r = self.env[2 * v], self.env[2 * v + 1]
            self.env[v] = l if r is None else (r if l is None else merge(l, r))
            self.count[v] = self.count[2 * v] + self.count[2 * v + 1]

    def __len__(self):
        return self.m

    def _hit(self, i, obj):
        return intersects(obj, self.objects[i])

    def query_from(self, obj, a: int = 0):
        if self.m == 0 or a >= self.m:
            return None
        if not isinstance(obj, Disk) or obj.r != 1.0:
            raise StructureMismatch("queries must be unit disks")
        a = max(a, 0)
        x, y = obj.cx, obj.cy
        # Iterative DFS in index order; node v covers [lo, hi).
        stack = [(1, 0, self.size)]
        while stack:
            v, lo, hi = stack.pop()
            if hi <= a or lo >= self.m or self.count[v] == 0:
                continue
            if not self.env[v].contains(x, y, SLACK):
                continue
            if hi - lo == 1:
                if self._hit(lo, obj):
                    return lo
                continue
            mid = (lo + hi) // 2
            stack.append((2 * v + 1, mid, hi))
            stack.append((2 * v, lo, mid))
        return None

    def query(self, obj):
        return self.query_from(obj, 0)

    def _set(self, i, delta):
        v = self.size + i
        while v:
            self.count[v] += delta
            v //= 2

    def delete(self, i: int):
        if self.alive[i]:
            self.alive[i] = False
            self._set(i, -1)
            self.log.append(i)

    def rollback(self):
        while self.log:
            i = self.log.pop()
            self.alive[i] = True
            self._set(i, 1)


STRUCTURES = {"naive": NaiveQueryStructure, "unitdisk": UnitDiskQueryStructure}


def make_structure(kind: str, objects, q=None):
    if kind == "naive":
        return NaiveQueryStructure(objects)
    if kind == "unitdisk":
        return UnitDiskQueryStructure(objects, q)
    raise ValueError(f"unknown structure {kind!r}")


def envelope_pieces(structure: UnitDiskQueryStructure) -> int:
    """Total number of angular pieces stored (a size measure for benchmarks)."""
    return sum(len(e) for e in structure.env if e is not None) if structure.m else 0


__all__ = ["NaiveQueryStructure", "UnitDiskQueryStructure", "make_structure", "STRUCTURES",
           "envelope_pieces"]
