import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from orthogeo.kernel import (
    AsymptoticGeodesicsError,
    DiskPoint,
    DomainError,
    Geodesic,
    IdealPoint,
    IntersectingGeodesicsError,
    MobiusMap,
    bisector,
    common_perpendicular,
    direction_at,
    dist_pg,
    dist_pp,
    equidistant_point,
    foot_pg,
    geodesic_through,
    mobius_normalize,
    perpendicular_length_crossratio,
    signed_distance,
    signed_distances,
)
from oracles import brute_perpendicular, disk_dist, HalfPlaneFrame, uhp_dist_to_geodesic

angles = st.floats(0.0, 2 * math.pi, exclude_max=True, allow_nan=False)
radii = st.floats(0.0, 0.97)


@st.composite
def disk_points(draw):
    r, t = draw(radii), draw(angles)
    return DiskPoint.from_complex(r * cmath.exp(1j * t))


@st.composite
def disjoint_pairs(draw):
    """Two ultraparallel geodesics with endpoints at least 0.05 apart."""
    base = draw(angles)
    gaps = draw(st.lists(st.floats(0.05, 1.0), min_size=4, max_size=4))
    total = sum(gaps)
    gaps = [g * 2 * math.pi / total for g in gaps]
    if min(gaps) < 0.05:
        gaps = [math.pi / 2] * 4
    a = base
    b = a + gaps[0]
    c = b + gaps[1]
    d = c + gaps[2]
    return Geodesic.from_angles(a, b), Geodesic.from_angles(c, d)


def test_ideal_point_normalises():
    assert IdealPoint(2 * math.pi + 1.0).angle == pytest.approx(1.0)
    assert IdealPoint(-math.pi / 2).angle == pytest.approx(3 * math.pi / 2)


def test_disk_point_rejects_boundary():
    with pytest.raises(DomainError):
        DiskPoint(1.0, 0.0)


def test_geodesic_equality_ignores_orientation():
    g = Geodesic.from_angles(0.1, 2.0)
    assert g == g.reversed()
    assert len({g, g.reversed()}) == 1


def test_dist_pp_origin():
    p = DiskPoint(0.5, 0.0)
    assert dist_pp(DiskPoint(0, 0), p) == pytest.approx(2 * math.atanh(0.5), abs=1e-15)


@settings(max_examples=200, deadline=None)
@given(disk_points(), disk_points())
def test_dist_pp_matches_cosh_formula(p, q):
    assert dist_pp(p, q) == pytest.approx(disk_dist(p.z, q.z), abs=1e-7)


@settings(max_examples=150, deadline=None)
@given(disk_points(), disk_points(), angles, radii)
def test_mobius_is_isometry(p, q, phi, r):
    T = MobiusMap.rotation(phi) @ MobiusMap.translation(r * cmath.exp(0.3j))
    assert dist_pp(T(p), T(q)) == pytest.approx(dist_pp(p, q), abs=1e-8)


def test_mobius_compose_inverse():
    T = MobiusMap.translation(0.3 + 0.4j) @ MobiusMap.rotation(1.1)
    assert (T @ T.inverse()).close_to(MobiusMap.identity())


def test_mobius_normalize_sends_points_to_cube_roots():
    pts = [IdealPoint(t) for t in (0.3, 1.0, 4.0)]
    T = mobius_normalize(*pts)
    got = [T.apply_angle(p.angle) for p in pts]
    for g, w in zip(got, (0.0, 2 * math.pi / 3, 4 * math.pi / 3)):
        assert abs(cmath.exp(1j * g) - cmath.exp(1j * w)) < 1e-12


def test_mobius_normalize_needs_ccw_order():
    with pytest.raises(DomainError):
        mobius_normalize(IdealPoint(0.0), IdealPoint(4.0), IdealPoint(1.0))


@settings(max_examples=200, deadline=None)
@given(disk_points(), angles, st.floats(0.05, 2 * math.pi - 0.05))
def test_signed_distance_against_half_plane(p, a, span):
    g = Geodesic.from_angles(a, a + span)
    F = HalfPlaneFrame([a, a + span, math.atan2(p.y, p.x)])
    ref = uhp_dist_to_geodesic(F.point(p.z), F.boundary(a), F.boundary(a + span))
    s = signed_distance(p, g)
    assert abs(s) == pytest.approx(ref, abs=1e-8)
    assert signed_distance(p, g.reversed()) == pytest.approx(-s, abs=1e-12)


def test_signed_distance_positive_on_left():
    g = Geodesic.from_angles(math.pi, 0.0)  # from -1 to 1, left is the upper half
    assert signed_distance(DiskPoint(0.0, 0.5), g) > 0
    assert signed_distance(DiskPoint(0.0, -0.5), g) < 0


def test_signed_distances_vectorised_matches_scalar():
    rng = np.random.default_rng(3)
    z = 0.9 * np.sqrt(rng.uniform(size=40)) * np.exp(2j * np.pi * rng.uniform(size=40))
    al = rng.uniform(0, 2 * np.pi, 7)
    be = al + rng.uniform(0.01, 2 * np.pi - 0.01, 7)
    S = signed_distances(z, al, be)
    for i in range(40):
        for k in range(7):
            ref = signed_distance(complex(z[i]), Geodesic.from_angles(al[k], be[k]))
            assert S[i, k] == pytest.approx(ref, abs=1e-10)


@settings(max_examples=100, deadline=None)
@given(disk_points(), angles, st.floats(0.05, 2 * math.pi - 0.05))
def test_foot_realises_distance(p, a, span):
    g = Geodesic.from_angles(a, a + span)
    f = foot_pg(p, g)
    assert abs(signed_distance(f, g)) < 1e-9
    assert dist_pp(p, f) == pytest.approx(dist_pg(p, g), abs=1e-8)


def test_geodesic_through_contains_points():
    p, q = DiskPoint(0.2, -0.1), DiskPoint(-0.5, 0.4)
    g = geodesic_through(p, q)
    assert g.contains(p) and g.contains(q)
    assert direction_at(p, q) == pytest.approx(direction_at(p, g.b), abs=1e-9)


def test_point_at_is_arclength():
    g = Geodesic.from_angles(0.3, 2.5)
    for t in (-2.0, 0.5, 3.0):
        assert dist_pp(g.point_at(0.0), g.point_at(t)) == pytest.approx(abs(t), abs=1e-9)
        assert g.contains(g.point_at(t))


@settings(max_examples=60, deadline=None)
@given(disjoint_pairs())
def test_common_perpendicular_against_brute_force(pair):
    g1, g2 = pair
    seg = common_perpendicular(g1, g2)
    ref = brute_perpendicular((g1.a.angle, g1.b.angle), (g2.a.angle, g2.b.angle))
    assert seg.length == pytest.approx(ref, abs=1e-7)
    assert g1.contains(seg.foot1, 1e-9) and g2.contains(seg.foot2, 1e-9)
    assert dist_pp(seg.foot1, seg.foot2) == pytest.approx(seg.length, abs=1e-9)


@settings(max_examples=200, deadline=None)
@given(disjoint_pairs())
def test_common_perpendicular_matches_cross_ratio(pair):
    g1, g2 = pair
    assert common_perpendicular(g1, g2).length == pytest.approx(
        perpendicular_length_crossratio(g1, g2), rel=1e-10, abs=1e-10
    )


def test_perpendicular_is_orthogonal_at_feet():
    g1, g2 = Geodesic.from_angles(0.2, 1.4), Geodesic.from_angles(2.5, 4.9)
    seg = common_perpendicular(g1, g2)
    for foot, g in ((seg.foot1, g1), (seg.foot2, g2)):
        u = direction_at(foot, g.b)
        v = direction_at(foot, seg.foot2 if foot is seg.foot1 else seg.foot1)
        assert abs(math.cos(u - v)) < 1e-8


def test_perpendicular_errors():
    with pytest.raises(IntersectingGeodesicsError):
        common_perpendicular(Geodesic.from_angles(0, 2), Geodesic.from_angles(1, 3))
    with pytest.raises(AsymptoticGeodesicsError):
        common_perpendicular(Geodesic.from_angles(0, 1), Geodesic.from_angles(1, 3))


def test_bisector_is_equidistant():
    g1, g2 = Geodesic.from_angles(0.0, 1.0), Geodesic.from_angles(2.0, 4.0)
    b = bisector(g1, g2)
    for t in (-3.0, 0.0, 1.7):
        p = b.point_at(t)
        assert dist_pg(p, g1) == pytest.approx(dist_pg(p, g2), abs=1e-9)


def test_bisector_of_asymptotic_pair_ends_at_shared_vertex():
    g1, g2 = Geodesic.from_angles(0.0, 1.0), Geodesic.from_angles(1.0, 3.0)
    b = bisector(g1, g2)
    assert min(abs(cmath.exp(1j * b.a.angle) - cmath.exp(1j)),
               abs(cmath.exp(1j * b.b.angle) - cmath.exp(1j))) < 1e-9


def test_equidistant_point_regular_triangle_centre():
    gs = [Geodesic.from_angles(2 * math.pi * k / 3, 2 * math.pi * (k + 1) / 3) for k in range(3)]
    p, d = equidistant_point(*gs)
    assert abs(p.z) < 1e-12
    assert d == pytest.approx(math.acosh(1 / math.sin(math.pi / 3)), abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(0.05, 1.0), min_size=3, max_size=3), angles)
def test_equidistant_point_ideal_triangle(w, base):
    t = base + np.cumsum(np.array(w) / sum(w) * 2 * math.pi)
    gs = [Geodesic.from_angles(t[k], t[(k + 1) % 3]) for k in range(3)]
    p, d = equidistant_point(*gs)
    assert d == pytest.approx(math.acosh(2 / math.sqrt(3)), abs=1e-9)
    for g in gs:
        assert dist_pg(p, g) == pytest.approx(d, abs=1e-9)
