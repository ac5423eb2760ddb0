import itertools
import math
from fractions import Fraction as Q

import pytest
from hypothesis import given, settings, strategies as st

from fairfan.geometry import (
    GE,
    LE,
    ConvexPartition,
    ConvexRegion,
    Flat,
    GeometryError,
    HalfSpace,
    Hyperplane,
    check_partition,
    det,
    find_ridge,
    in_general_position,
    interiors_disjoint,
    nullspace,
    orientation,
    project_about_flat,
    solve,
    strict_interior_point,
    sub,
)


def leibniz_det(rows):
    n = len(rows)
    total = Q(0)
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i, j in itertools.combinations(range(n), 2) if perm[i] > perm[j])
        term = Q(-1) ** inv
        for i in range(n):
            term *= rows[i][perm[i]]
        total += term
    return total


def brute_orientation(points):
    base = points[0]
    v = leibniz_det([[Q(a) - Q(b) for a, b in zip(p, base)] for p in points[1:]])
    return (v > 0) - (v < 0)


small = st.integers(-6, 6)
fracs = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@pytest.mark.parametrize(
    "pts, expected",
    [
        ([(0, 0), (1, 0), (0, 1)], 1),
        ([(0, 0), (1, 0), (2, 0)], 0),
        ([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)], 1),
        ([(0, 0), (0, 1), (1, 0)], -1),
    ],
)
def test_orientation_examples(pts, expected):
    assert orientation(pts) == expected


@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(fracs, min_size=n, max_size=n), min_size=n, max_size=n)))
@settings(max_examples=150, deadline=None)
def test_det_matches_leibniz(rows):
    assert det(rows) == leibniz_det(rows)


@given(st.integers(2, 3).flatmap(lambda d: st.lists(st.tuples(*[small] * d), min_size=d + 1, max_size=d + 1)))
@settings(max_examples=200, deadline=None)
def test_orientation_matches_determinant_oracle(pts):
    assert orientation(pts) == brute_orientation(pts)


@given(st.lists(st.tuples(small, small), min_size=3, max_size=7, unique=True))
@settings(max_examples=150, deadline=None)
def test_general_position_matches_all_triples(pts):
    expected = all(brute_orientation(t) != 0 for t in itertools.combinations(pts, 3))
    assert in_general_position(pts) == expected


def test_solve_and_nullspace():
    a = [[Q(2), Q(1)], [Q(1), Q(3)]]
    x = solve(a, [Q(3), Q(5)])
    assert [sum(r[j] * x[j] for j in range(2)) for r in a] == [3, 5]
    ns = nullspace([[Q(1), Q(1), Q(0)]], 3)
    assert len(ns) == 2
    for v in ns:
        assert v[0] + v[1] == 0


def test_ridge_square_is_a_vertex():
    sq = [(0, 0), (1, 0), (1, 1), (0, 1)]
    r = find_ridge(sq)
    assert len(r.indices) == 1
    for k, p in enumerate(sq):
        v = r.support.value(p)
        assert v >= 0 and (v == 0) == (k in r.indices)


def test_ridge_rejects_collinear():
    with pytest.raises(GeometryError):
        find_ridge([(0, 0), (1, 1), (2, 2)])


def hull_edges_3d(pts):
    """Edges of facets found by brute force over all triples."""
    edges = set()
    for i, j, k in itertools.combinations(range(len(pts)), 3):
        signs = set()
        for t in range(len(pts)):
            if t not in (i, j, k):
                signs.add(brute_orientation([pts[i], pts[j], pts[k], pts[t]]))
        if len(signs) <= 1:
            edges |= {(i, j), (i, k), (j, k)}
    return edges


@given(st.lists(st.tuples(small, small, small), min_size=5, max_size=8, unique=True))
@settings(max_examples=60, deadline=None)
def test_ridge_3d_is_a_hull_edge(pts):
    if not in_general_position(pts):
        return
    r = find_ridge(pts)
    assert tuple(sorted(r.indices)) in hull_edges_3d(pts)
    for k, p in enumerate(pts):
        v = r.support.value(p)
        assert v >= 0 and (v == 0) == (k in r.indices)


@given(st.integers(2, 4).flatmap(lambda d: st.lists(st.tuples(*[small] * d), min_size=d + 2, max_size=d + 5, unique=True)))
@settings(max_examples=60, deadline=None)
def test_face_property_angles_fit_in_half_plane(pts):
    if not in_general_position(pts):
        return
    r = find_ridge(pts)
    off = [i for i in range(len(pts)) if i not in r.indices]
    proj = project_about_flat(pts, r.flat, off)
    angles = sorted(im.angle for im in proj.images)
    gaps = [b - a for a, b in zip(angles, angles[1:])] + [angles[0] + 2 * math.pi - angles[-1]]
    assert max(gaps) >= math.pi - 1e-9


def test_projection_examples():
    proj = project_about_flat([(1, 1)], Flat((0, 0), ()))
    im = proj.images[0]
    assert math.isclose(im.angle, math.pi / 4)
    assert math.isclose(im.radius, math.sqrt(2))
    proj = project_about_flat([(1, 0, 5)], Flat((0, 0, 0), ((0, 0, 1),)))
    im = proj.images[0]
    assert math.isclose(im.radius, 1.0)
    assert min(im.angle, 2 * math.pi - im.angle) < 1e-12


def brute_sqdist_2d(region, x):
    """Distance from x to a planar region: candidates are x, its projections on
    each line and pairwise line intersections."""
    lines = [h.normalized() for h in region.halfspaces]
    cands = [tuple(Q(c) for c in x)]
    for a, b in lines:
        nn = a[0] ** 2 + a[1] ** 2
        t = (b - a[0] * x[0] - a[1] * x[1]) / nn
        cands.append((x[0] + t * a[0], x[1] + t * a[1]))
    for (a, b), (c, e) in itertools.combinations(lines, 2):
        dd = a[0] * c[1] - a[1] * c[0]
        if dd:
            cands.append(((b * c[1] - a[1] * e) / dd, (a[0] * e - b * c[0]) / dd))
    best = None
    for p in cands:
        if region.contains(p):
            v = (p[0] - x[0]) ** 2 + (p[1] - x[1]) ** 2
            best = v if best is None or v < best else best
    return best


halfplanes = st.builds(
    lambda ab, off, side: HalfSpace(Hyperplane((Q(ab[0]), Q(ab[1])), Q(off)), side),
    st.tuples(small, small).filter(any), small, st.sampled_from([LE, GE]),
)


@given(st.lists(halfplanes, min_size=1, max_size=3), st.tuples(small, small), st.integers(1, 12))
@settings(max_examples=300, deadline=None)
def test_ball_test_matches_brute_distance(hs, x, r8):
    region = ConvexRegion(tuple(hs), 2)
    x = (Q(x[0]), Q(x[1]))
    r = Q(r8, 4)
    d2 = brute_sqdist_2d(region, x)
    if d2 is None:
        return  # empty region; brute force has no candidate
    assert region.sqdist(x) == d2
    if strict_interior_point(region.halfspaces, 2) is not None:
        assert region.meets_open_ball(x, r) == (d2 < r * r)


def test_interior_points_and_disjointness():
    right = ConvexRegion((HalfSpace(Hyperplane((Q(1), Q(0)), Q(0)), GE),), 2)
    left = ConvexRegion((HalfSpace(Hyperplane((Q(1), Q(0)), Q(0)), LE),), 2)
    up = ConvexRegion((HalfSpace(Hyperplane((Q(0), Q(1)), Q(0)), GE),), 2)
    assert interiors_disjoint(right, left)
    assert not interiors_disjoint(right, up)
    p = right.interior_point()
    assert right.contains_interior(p)
    slab = ConvexRegion(
        (HalfSpace(Hyperplane((Q(1), Q(0)), Q(0)), GE), HalfSpace(Hyperplane((Q(1), Q(0)), Q(0)), LE)), 2
    )
    assert slab.interior_point() is None


def test_check_partition_reports_overlap_and_accepts_halves():
    h = Hyperplane((Q(1), Q(1)), Q(1))
    good = ConvexPartition([ConvexRegion((HalfSpace(h, GE),), 2), ConvexRegion((HalfSpace(h, LE),), 2)])
    assert check_partition(good, [(Q(0), Q(0)), (Q(5), Q(5))]) == []
    bad = ConvexPartition([ConvexRegion((HalfSpace(h, GE),), 2), ConvexRegion((HalfSpace(h, GE),), 2)])
    assert check_partition(bad)
    assert check_partition(bad, [(Q(0), Q(0))])


def test_flat_contains():
    f = Flat((Q(1), Q(0), Q(0)), ((Q(0), Q(1), Q(0)),))
    assert f.contains((1, 5, 0))
    assert not f.contains((1, 5, 1))
    assert sub((1, 2), (1, 1)) == (0, 1)
