"""Boundary of a union of disks that all contain a common point q.

Such a union is star-shaped around q: along every ray from q it ends where
the farthest disk boundary is crossed. The boundary is stored as a cyclic
list of angular pieces, each owned by one disk. Two disk boundaries seen
from q cross at most twice, so two envelopes merge by splitting at their
breakpoints and at the circle-circle crossing angles inside each interval.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass

from ..errors import PointNotInterior

TAU = 2.0 * math.pi


def _exit(cx, cy, r, qx, qy, theta):
    """Distance from q to the circle boundary along direction theta (q inside)."""
    ux, uy = math.cos(theta), math.sin(theta)
    dx, dy = cx - qx, cy - qy
    b = dx * ux + dy * uy
    c = dx * dx + dy * dy - r * r
    return b + math.sqrt(max(b * b - c, 0.0))


def _crossing_angles(a, b, qx, qy):
    """Angles (from q, in [0, 2pi)) of the intersection points of two circles."""
    ax, ay, ar = a
    bx, by, br = b
    dx, dy = bx - ax, by - ay
    d2 = dx * dx + dy * dy
    if d2 == 0.0:
        return []
    d = math.sqrt(d2)
    if d > ar + br or d < abs(ar - br):
        return []
    t = (ar * ar - br * br + d2) / (2 * d)
    h = math.sqrt(max(ar * ar - t * t, 0.0))
    mx, my = ax + t * dx / d, ay + t * dy / d
    pts = [(mx - h * dy / d, my + h * dx / d), (mx + h * dy / d, my - h * dx / d)]
    return [math.atan2(y - qy, x - qx) % TAU for x, y in pts]


@dataclass
class Envelope:
    """Angular pieces: disk ``owners[k]`` bounds the union on [starts[k], starts[k+1])."""

    q: tuple[float, float]
    disks: list[tuple[float, float, float]]
    starts: list[float]
    owners: list[int]

    def __len__(self):
        return len(self.starts)

    def radius(self, theta: float) -> float:
        k = bisect_right(self.starts, theta % TAU) - 1
        cx, cy, r = self.disks[self.owners[k]]
        return _exit(cx, cy, r, self.q[0], self.q[1], theta)

    def contains(self, x: float, y: float, slack: float = 0.0) -> bool:
        dx, dy = x - self.q[0], y - self.q[1]
        if dx == 0.0 and dy == 0.0:
            return True
        return math.hypot(dx, dy) <= self.radius(math.atan2(dy, dx)) + slack

    def arcs(self):
        """(start angle, end angle, disk index) triples covering [0, 2pi)."""
        ends = self.starts[1:] + [TAU]
        return list(zip(self.starts, ends, self.owners))


def _single(disks, i, q):
    return Envelope(q, disks, [0.0], [i])


def _coalesce(starts, owners):
    out_s, out_o = [], []
    for s, o in zip(starts, owners):
        if out_o and out_o[-1] == o:
            continue
        out_s.append(s)
        out_o.append(o)
    return out_s, out_o


def merge(e1: Envelope, e2: Envelope) -> Envelope:
    """Envelope of the union of two pierced unions (same q and disk table)."""
    q = e1.q
    disks = e1.disks
    cuts = sorted(set(e1.starts) | set(e2.starts))
    bounds = cuts + [TAU]
    starts, owners = [], []
    for s, e in zip(bounds, bounds[1:]):
        if e - s <= 0.0:
            continue
        o1 = e1.owners[bisect_right(e1.starts, s) - 1]
        o2 = e2.owners[bisect_right(e2.starts, s) - 1]
        inner = sorted(a for a in _crossing_angles(disks[o1], disks[o2], *q) if s < a < e)
        pts = [s] + inner + [e]
        for a, b in zip(pts, pts[1:]):
            if b - a <= 0.0:
                continue
            mid = (a + b) / 2
            r1 = _exit(*disks[o1], *q, mid)
            r2 = _exit(*disks[o2], *q, mid)
            starts.append(a)
            owners.append(o1 if r1 >= r2 else o2)
    starts, owners = _coalesce(starts, owners)
    return Envelope(q, disks, starts, owners)


def build_envelope(disks, indices, q) -> Envelope:
    """Divide-and-conquer envelope of ``disks[i]`` for i in ``indices``."""
    idx = list(indices)
    if not idx:
        raise ValueError("empty family")
    if len(idx) == 1:
        return _single(disks, idx[0], q)
    mid = len(idx) // 2
    return merge(build_envelope(disks, idx[:mid], q), build_envelope(disks, idx[mid:], q))


def union_pierced(disks, q) -> Envelope:
    """Boundary of the union of ``disks`` (objects with cx, cy, r or triples).

    Raises PointNotInterior unless q lies strictly inside every disk.
    """
    table = []
    for d in disks:
        cx, cy, r = (d.cx, d.cy, d.r) if hasattr(d, "cx") else d
        if math.hypot(q[0] - cx, q[1] - cy) >= r:
            raise PointNotInterior(f"{q} is not interior to disk ({cx}, {cy}, {r})")
        table.append((float(cx), float(cy), float(r)))
    return build_envelope(table, range(len(table)), (float(q[0]), float(q[1])))
