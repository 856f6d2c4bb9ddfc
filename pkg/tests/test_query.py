import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from geomatch.errors import PointNotInterior, StructureMismatch
from geomatch.geometry import Box, Disk
from geomatch.sparsify import NaiveQueryStructure, UnitDiskQueryStructure, union_pierced
from geomatch.sparsify.query import envelope_pieces, make_structure


def pierced_unit_disks(rng, m, q=(0, 0)):
    ang = rng.uniform(0, 2 * math.pi, m)
    rad = np.sqrt(rng.uniform(0, 1, m))
    return [Disk(float(q[0] + r * math.cos(a)), float(q[1] + r * math.sin(a)), 1.0) for a, r in zip(ang, rad)]


def run_script(rng, m, ops, monotone=True):
    """Apply the same random operations to both structures; return answer lists."""
    objs = pierced_unit_disks(rng, m)
    a, b = NaiveQueryStructure(objs), UnitDiskQueryStructure(objs, (0, 0))
    out_a, out_b = [], []
    cursor = 0
    for _ in range(ops):
        r = rng.random()
        x, y = rng.uniform(-3.5, 3.5, size=2)
        probe = Disk(float(x), float(y), 1.0)
        if r < 0.55:
            start = cursor if monotone else int(rng.integers(0, m + 1))
            ra, rb = a.query_from(probe, start), b.query_from(probe, start)
            out_a.append(ra)
            out_b.append(rb)
            if monotone and ra is not None:
                cursor = ra + 1
        elif r < 0.8:
            i = int(rng.integers(0, m))
            a.delete(i)
            b.delete(i)
        elif r < 0.9:
            out_a.append(a.query(probe))
            out_b.append(b.query(probe))
        else:
            a.rollback()
            b.rollback()
            cursor = 0
    return out_a, out_b


def test_naive_delete_all_then_rollback():
    objs = [Disk(0, 0, 1), Disk(0.5, 0, 1)]
    s = NaiveQueryStructure(objs)
    probe = Disk(0.2, 0.1, 1)
    assert s.query(probe) == 0
    s.delete(0)
    s.delete(1)
    assert s.query(probe) is None
    s.rollback()
    assert s.query(probe) == 0


def test_naive_matches_fresh_rebuild(rng):
    objs = [Disk(float(x), float(y), 1.0) for x, y in rng.uniform(-1, 1, size=(30, 2))]
    s = NaiveQueryStructure(objs)
    dead = set()
    for _ in range(300):
        if rng.random() < 0.4:
            i = int(rng.integers(0, 30))
            s.delete(i)
            dead.add(i)
        elif rng.random() < 0.1:
            s.rollback()
            dead.clear()
        probe = Disk(*map(float, rng.uniform(-3, 3, size=2)), 1.0)
        alive = [i for i in range(30) if i not in dead]
        fresh = NaiveQueryStructure([objs[i] for i in alive])
        got = fresh.query(probe)
        assert s.query(probe) == (None if got is None else alive[got])


def test_single_disk_hit_iff_within_two():
    s = UnitDiskQueryStructure([Disk(0.3, 0.2, 1.0)], (0, 0))
    assert s.query(Disk(2.3, 0.2, 1.0)) == 0
    assert s.query(Disk(2.30001, 0.2, 1.0)) is None


def test_query_beyond_last_index():
    objs = [Disk(0.1 * i, 0, 1.0) for i in range(5)]
    s = UnitDiskQueryStructure(objs, (0, 0))
    assert s.query_from(Disk(0, 0, 1.0), 5) is None
    assert s.query_from(Disk(0, 0, 1.0), 3) == 3


def test_unit_disk_structure_rejects_other_shapes():
    with pytest.raises(StructureMismatch):
        UnitDiskQueryStructure([Disk(0, 0, 2.0)], (0, 0))
    with pytest.raises(StructureMismatch):
        UnitDiskQueryStructure([Disk(5, 0, 1.0)], (0, 0))
    s = UnitDiskQueryStructure([Disk(0, 0, 1.0)], (0, 0))
    with pytest.raises(StructureMismatch):
        s.query(Box(0, 0, 1, 1))
    with pytest.raises(ValueError):
        make_structure("kdtree", [])


def test_empty_structure():
    s = UnitDiskQueryStructure([], (0, 0))
    assert s.query(Disk(0, 0, 1.0)) is None


@pytest.mark.parametrize("seed", range(5))
def test_monotone_scripts_agree(seed):
    rng = np.random.default_rng(seed)
    a, b = run_script(rng, int(rng.integers(1, 60)), 1000, monotone=True)
    assert a == b


@pytest.mark.parametrize("seed", range(5))
def test_arbitrary_scripts_agree(seed):
    rng = np.random.default_rng(100 + seed)
    a, b = run_script(rng, int(rng.integers(1, 60)), 1000, monotone=False)
    assert a == b


def test_envelope_size_is_linear(rng):
    s = UnitDiskQueryStructure(pierced_unit_disks(rng, 64), (0, 0))
    # Each level of the tree stores O(m) pieces for pseudo-disk unions.
    assert envelope_pieces(s) <= 7 * 3 * 64 * 7


def test_union_of_one_disk():
    e = union_pierced([(0.5, 0.0, 2.0)], (0, 0))
    assert len(e) == 1 and e.arcs() == [(0.0, 2 * math.pi, 0)]


def test_union_of_identical_disks():
    e = union_pierced([(0.5, 0.0, 2.0), (0.5, 0.0, 2.0)], (0, 0))
    assert len(e) == 1
    assert e.contains(2.5, 0.0) and not e.contains(2.51, 0.0)


def test_point_not_interior():
    with pytest.raises(PointNotInterior):
        union_pierced([(0, 0, 1.0), (1.0, 0, 1.0)], (0, 0))
    with pytest.raises(PointNotInterior):
        union_pierced([(3, 0, 1.0)], (0, 0))


def test_union_membership_matches_brute_force(rng):
    for _ in range(3):
        k = 50
        r = rng.uniform(0.5, 3, k)
        ang = rng.uniform(0, 2 * math.pi, k)
        d = r * np.sqrt(rng.uniform(0, 0.98, k))
        disks = [(float(dd * math.cos(a)), float(dd * math.sin(a)), float(rr)) for dd, a, rr in zip(d, ang, r)]
        e = union_pierced(disks, (0, 0))
        pts = rng.uniform(-6.5, 6.5, size=(10_000, 2))
        cx = np.array([t[0] for t in disks])
        cy = np.array([t[1] for t in disks])
        rr = np.array([t[2] for t in disks])
        brute = (((pts[:, None, 0] - cx) ** 2 + (pts[:, None, 1] - cy) ** 2) <= rr ** 2).any(axis=1)
        got = np.array([e.contains(x, y) for x, y in pts])
        assert np.array_equal(got, brute)


@given(st.lists(st.tuples(st.floats(0, 2 * math.pi), st.floats(0, 0.95), st.floats(0.3, 4)),
                min_size=1, max_size=25),
       st.lists(st.tuples(st.floats(-8, 8), st.floats(-8, 8)), min_size=1, max_size=50))
def test_union_membership_property(spec, pts):
    disks = [(f * r * math.cos(a), f * r * math.sin(a), r) for a, f, r in spec]
    e = union_pierced(disks, (0.0, 0.0))
    for x, y in pts:
        dists = [math.hypot(x - cx, y - cy) - r for cx, cy, r in disks]
        if min(abs(t) for t in dists) < 1e-9:
            continue  # on a boundary; rounding may go either way
        assert e.contains(x, y) == (min(dists) <= 0)
