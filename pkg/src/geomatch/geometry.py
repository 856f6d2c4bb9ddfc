"""Closed disks and axis-parallel boxes in the plane.

Predicates are exact: a float evaluation decides whenever its margin clearly
exceeds the rounding error, and ambiguous cases are recomputed with
``fractions.Fraction`` from the (exactly representable) float inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.spatial import cKDTree

from .errors import EmptyPiercing

_REL = 1e-9  # relative margin under which float answers are rechecked exactly


@dataclass(frozen=True)
class Disk:
    cx: float
    cy: float
    r: float

    kind = "disk"

    def __post_init__(self):
        if not self.r > 0 or not all(map(math.isfinite, (self.cx, self.cy, self.r))):
            raise ValueError(f"invalid disk {self}")

    @property
    def anchor(self):
        return (self.cx, self.cy)

    @property
    def bbox(self):
        return (self.cx - self.r, self.cy - self.r, self.cx + self.r, self.cy + self.r)

    def diameter(self) -> float:
        return 2.0 * self.r

    def to_dict(self):
        return {"kind": "disk", "cx": self.cx, "cy": self.cy, "r": self.r}

    def translate(self, dx, dy):
        return Disk(self.cx + dx, self.cy + dy, self.r)


@dataclass(frozen=True)
class Box:
    x0: float
    y0: float
    x1: float
    y1: float

    kind = "box"

    def __post_init__(self):
        if not all(map(math.isfinite, (self.x0, self.y0, self.x1, self.y1))):
            raise ValueError(f"invalid box {self}")
        if not (self.x0 < self.x1 and self.y0 < self.y1):
            raise ValueError(f"box needs positive extents: {self}")

    @property
    def anchor(self):
        return ((self.x0 + self.x1) / 2, (self.y0 + self.y1) / 2)

    @property
    def bbox(self):
        return (self.x0, self.y0, self.x1, self.y1)

    @property
    def corners(self):
        return ((self.x0, self.y0), (self.x0, self.y1), (self.x1, self.y0), (self.x1, self.y1))

    def diameter(self) -> float:
        return math.hypot(self.x1 - self.x0, self.y1 - self.y0)

    def to_dict(self):
        return {"kind": "box", "x0": self.x0, "y0": self.y0, "x1": self.x1, "y1": self.y1}

    def translate(self, dx, dy):
        return Box(self.x0 + dx, self.y0 + dy, self.x1 + dx, self.y1 + dy)


GeomObject = Disk | Box


def unit_disk(cx: float, cy: float) -> Disk:
    return Disk(float(cx), float(cy), 1.0)


def from_dict(d: dict) -> GeomObject:
    kind = d.get("kind")
    if kind == "disk":
        return Disk(float(d["cx"]), float(d["cy"]), float(d["r"]))
    if kind == "box":
        return Box(float(d["x0"]), float(d["y0"]), float(d["x1"]), float(d["y1"]))
    raise ValueError(f"unknown object kind {kind!r}")


def diameter(a: GeomObject) -> float:
    return a.diameter()


def _F(x) -> Fraction:
    return Fraction(x)


def _le(lhs: float, rhs: float, exact):
    """lhs <= rhs, deferring to ``exact()`` when the two are too close to call."""
    if abs(lhs - rhs) > _REL * (abs(lhs) + abs(rhs) + 1e-300):
        return lhs < rhs
    return exact()


def _disk_disk(a: Disk, b: Disk) -> bool:
    dx, dy, s = a.cx - b.cx, a.cy - b.cy, a.r + b.r
    return _le(dx * dx + dy * dy, s * s, lambda: (
        (_F(a.cx) - _F(b.cx)) ** 2 + (_F(a.cy) - _F(b.cy)) ** 2 <= (_F(a.r) + _F(b.r)) ** 2))


def _disk_box(d: Disk, b: Box) -> bool:
    qx = min(max(d.cx, b.x0), b.x1)
    qy = min(max(d.cy, b.y0), b.y1)
    dx, dy = d.cx - qx, d.cy - qy

    def exact():
        fx, fy = _F(d.cx), _F(d.cy)
        ex = fx - min(max(fx, _F(b.x0)), _F(b.x1))
        ey = fy - min(max(fy, _F(b.y0)), _F(b.y1))
        return ex * ex + ey * ey <= _F(d.r) ** 2

    return _le(dx * dx + dy * dy, d.r * d.r, exact)


def _box_box(a: Box, b: Box) -> bool:
    # Comparisons of floats are exact; no fallback needed.
    return a.x0 <= b.x1 and b.x0 <= a.x1 and a.y0 <= b.y1 and b.y0 <= a.y1


def intersects(a: GeomObject, b: GeomObject) -> bool:
    """Whether the closed regions share a point (tangency counts)."""
    if isinstance(a, Disk):
        return _disk_disk(a, b) if isinstance(b, Disk) else _disk_box(a, b)
    return _disk_box(b, a) if isinstance(b, Disk) else _box_box(a, b)


def contains_point(a: GeomObject, x: float, y: float) -> bool:
    """Exact closed membership of the point (x, y)."""
    if isinstance(a, Box):
        return a.x0 <= x <= a.x1 and a.y0 <= y <= a.y1
    dx, dy = x - a.cx, y - a.cy
    return _le(dx * dx + dy * dy, a.r * a.r, lambda: (
        (_F(x) - _F(a.cx)) ** 2 + (_F(y) - _F(a.cy)) ** 2 <= _F(a.r) ** 2))


def pierce_points(a: GeomObject) -> list[tuple[int, int]]:
    """All integer points in the closed region, ordered by (x, y)."""
    x0, y0, x1, y1 = a.bbox
    out = [(x, y)
           for x in range(math.ceil(x0), math.floor(x1) + 1)
           for y in range(math.ceil(y0), math.floor(y1) + 1)
           if contains_point(a, x, y)]
    if not out:
        raise EmptyPiercing(f"{a} contains no integer point")
    return out


def lowest_pierce_point(a: GeomObject) -> tuple[int, int]:
    """Lexicographically smallest integer point of the region."""
    x0, y0, x1, y1 = a.bbox
    for x in range(math.ceil(x0), math.floor(x1) + 1):
        for y in range(math.ceil(y0), math.floor(y1) + 1):
            if contains_point(a, x, y):
                return (x, y)
    raise EmptyPiercing(f"{a} contains no integer point")


# ---------------------------------------------------------------------------
# Boundary intersection points (used as depth / density candidates)


def _circle_circle(a: Disk, b: Disk):
    dx, dy = b.cx - a.cx, b.cy - a.cy
    d2 = dx * dx + dy * dy
    d = math.sqrt(d2)
    if d == 0 or d > a.r + b.r or d < abs(a.r - b.r):
        return []
    t = (a.r * a.r - b.r * b.r + d2) / (2 * d)
    h = math.sqrt(max(a.r * a.r - t * t, 0.0))
    mx, my = a.cx + t * dx / d, a.cy + t * dy / d
    return [(mx - h * dy / d, my + h * dx / d), (mx + h * dy / d, my - h * dx / d)]


def _circle_box(c: Disk, b: Box):
    pts = []
    for x in (b.x0, b.x1):
        h2 = c.r * c.r - (x - c.cx) ** 2
        if h2 >= 0:
            h = math.sqrt(h2)
            pts += [(x, y) for y in (c.cy - h, c.cy + h) if b.y0 <= y <= b.y1]
    for y in (b.y0, b.y1):
        h2 = c.r * c.r - (y - c.cy) ** 2
        if h2 >= 0:
            h = math.sqrt(h2)
            pts += [(x, y) for x in (c.cx - h, c.cx + h) if b.x0 <= x <= b.x1]
    return pts


def _box_box_pts(a: Box, b: Box):
    pts = []
    for x in (a.x0, a.x1):
        for y in (b.y0, b.y1):
            if b.x0 <= x <= b.x1 and a.y0 <= y <= a.y1:
                pts.append((x, y))
    for x in (b.x0, b.x1):
        for y in (a.y0, a.y1):
            if a.x0 <= x <= a.x1 and b.y0 <= y <= b.y1:
                pts.append((x, y))
    return pts


def boundary_intersections(a: GeomObject, b: GeomObject):
    if isinstance(a, Disk):
        return _circle_circle(a, b) if isinstance(b, Disk) else _circle_box(a, b)
    return _circle_box(b, a) if isinstance(b, Disk) else _box_box_pts(a, b)


def _near_contains(a: GeomObject, x: float, y: float, tol: float) -> bool:
    if isinstance(a, Box):
        return a.x0 - tol <= x <= a.x1 + tol and a.y0 - tol <= y <= a.y1 + tol
    return math.hypot(x - a.cx, y - a.cy) <= a.r + tol


def _tolerance(objects) -> float:
    scale = max(max(abs(v) for v in o.bbox) for o in objects)
    return 1e-9 * max(scale, 1.0)


def _neighbours(objects, adjacency):
    if adjacency is not None:
        return adjacency
    from .graph import build_graph

    return build_graph(objects).adj


def candidate_points(objects, adjacency=None):
    """Yield (point, owner) pairs: anchors, box corners, boundary crossings.

    Each point lies in ``owner`` (up to rounding), so only the owner's
    neighbours can cover it.
    """
    adjacency = _neighbours(objects, adjacency)
    for i, o in enumerate(objects):
        yield o.anchor, i
        if isinstance(o, Box):
            for c in o.corners:
                yield c, i
        for j in adjacency[i]:
            if j > i:
                for pt in boundary_intersections(o, objects[j]):
                    yield pt, i


def depth_with_witness(objects, adjacency=None):
    """Maximum number of objects covering one point, with such a point.

    The deepest cell is the intersection K of the covering (convex, closed)
    objects. If one object alone bounds K then K is that object and contains
    its anchor; otherwise K has a vertex where two boundaries cross or at a
    box corner. Every vertex of K lies in all members, so scanning anchors,
    corners and pairwise boundary crossings finds the maximum. Crossing
    points are computed in floats, so membership is tested with a tiny
    absolute tolerance.
    """
    if not objects:
        raise ValueError("depth of an empty family")
    adjacency = _neighbours(objects, adjacency)
    tol = _tolerance(objects)
    best, witness = 0, None
    for (x, y), i in candidate_points(objects, adjacency):
        cnt = 1 + sum(1 for j in adjacency[i] if _near_contains(objects[j], x, y, tol))
        if cnt > best:
            best, witness = cnt, (x, y)
    return best, witness


def depth(objects, adjacency=None) -> int:
    return depth_with_witness(objects, adjacency)[0]


def _dist_to(objects, cx: float, cy: float, idx: np.ndarray, arrays) -> np.ndarray:
    kind, a0, a1, a2, a3 = arrays
    k, p0, p1, p2, p3 = kind[idx], a0[idx], a1[idx], a2[idx], a3[idx]
    out = np.empty(idx.size)
    disk = k == 0
    out[disk] = np.maximum(np.hypot(cx - p0[disk], cy - p1[disk]) - p2[disk], 0.0)
    bx = ~disk
    qx = np.clip(cx, p0[bx], p2[bx])
    qy = np.clip(cy, p1[bx], p3[bx])
    out[bx] = np.hypot(cx - qx, cy - qy)
    return out


def _shape_arrays(objects):
    n = len(objects)
    kind = np.zeros(n, dtype=np.int8)
    a = np.zeros((4, n))
    for i, o in enumerate(objects):
        if isinstance(o, Disk):
            a[:, i] = (o.cx, o.cy, o.r, 0.0)
        else:
            kind[i] = 1
            a[:, i] = o.bbox
    return kind, a[0], a[1], a[2], a[3]


def max_stabbing(lo: np.ndarray, hi: np.ndarray) -> int:
    """Largest number of closed intervals [lo, hi] sharing a point."""
    keep = lo <= hi
    lo, hi = lo[keep], hi[keep]
    if lo.size == 0:
        return 0
    # Opening events sort before closing ones at equal coordinates.
    pts = np.concatenate([lo, hi])
    delta = np.concatenate([np.ones(lo.size, np.int64), -np.ones(hi.size, np.int64)])
    order = np.lexsort((-delta, pts))
    return int(np.cumsum(delta[order]).max())


def density_estimate(objects, adjacency=None, centers=None) -> int:
    """Lower bound on the density from a finite family of test regions.

    Test regions X are (a) disks centred at candidate points with radius
    r >= 0, counting objects U with diam(U) >= 2r that meet X, and (b) every
    object X = U itself, counting objects at least as large meeting it. For a
    fixed centre an object qualifies for radius r exactly when
    dist(centre, U) <= r <= diam(U)/2, so the best radius is found by
    interval stabbing; the optimum is attained at some diam(U)/2, hence the
    radius set {0} u {diam/2} loses nothing. ``centers`` overrides the
    candidate centre set.
    """
    if not objects:
        raise ValueError("density of an empty family")
    n = len(objects)
    adjacency = _neighbours(objects, adjacency)
    diam = np.array([o.diameter() for o in objects])
    arrays = _shape_arrays(objects)
    anchors = np.array([o.anchor for o in objects])
    kdt = cKDTree(anchors)
    reach = float(diam.max())
    if centers is None:
        centers = [pt for pt, _ in candidate_points(objects, adjacency)]
    best = 1
    tol = _tolerance(objects)
    for cx, cy in centers:
        idx = np.asarray(kdt.query_ball_point((cx, cy), reach + tol), dtype=np.int64)
        if idx.size == 0:
            continue
        dist = _dist_to(objects, cx, cy, idx, arrays)
        best = max(best, max_stabbing(np.maximum(dist - tol, 0.0), diam[idx] / 2))
    # X = U: neighbours of U that are at least as large, plus U itself.
    for i in range(n):
        cnt = 1 + sum(1 for j in adjacency[i] if diam[j] >= diam[i])
        best = max(best, cnt)
    return int(best)


def density_reference(objects, adjacency=None, step: float = 0.25) -> int:
    """Slow density value over a superset of the estimate's test regions.

    Adds all pairwise anchor midpoints and a grid of spacing ``step`` over
    the bounding box to the candidate centres. Meant for small instances
    (tests, n <= 40) as the upper side of the nested candidate-set check.
    """
    if not objects:
        raise ValueError("density of an empty family")
    adjacency = _neighbours(objects, adjacency)
    centers = [pt for pt, _ in candidate_points(objects, adjacency)]
    anchors = [o.anchor for o in objects]
    for i, (ax, ay) in enumerate(anchors):
        for bx, by in anchors[i + 1:]:
            centers.append(((ax + bx) / 2, (ay + by) / 2))
    x0 = min(o.bbox[0] for o in objects)
    y0 = min(o.bbox[1] for o in objects)
    x1 = max(o.bbox[2] for o in objects)
    y1 = max(o.bbox[3] for o in objects)
    for x in np.arange(x0, x1 + step, step):
        for y in np.arange(y0, y1 + step, step):
            centers.append((float(x), float(y)))
    return density_estimate(objects, adjacency, centers=centers)
