import cmath
import math

import numpy as np
import pytest

from pcm.errors import GeometryError
from pcm.sphere import (INF, Arc, GenCircle, MapKind, MoebiusMap, SpherePoint,
                        as_point, chordal)


def rand_map(rng, elliptic=False):
    if elliptic:
        lam = cmath.exp(2j * math.pi * rng.uniform(0.05, 0.95))
        conj = MoebiusMap(*(rng.standard_normal(4) + 1j * rng.standard_normal(4)))
        return conj @ MoebiusMap.scaling(lam) @ conj.inverse()
    while True:
        coeffs = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        try:
            return MoebiusMap(*coeffs).normalized()
        except GeometryError:
            continue


def rand_point(rng):
    return SpherePoint(complex(*rng.standard_normal(2)))


# ---------------------------------------------------------------------------
# points and the chordal metric
# ---------------------------------------------------------------------------

def test_chordal_basics():
    assert chordal(1 + 1j, 1 + 1j) == 0.0
    assert chordal(0, INF) == pytest.approx(2.0)
    assert chordal(0, 1) == pytest.approx(math.sqrt(2.0))


def test_chordal_range_and_symmetry(rng):
    for _ in range(200):
        p, q = rand_point(rng), rand_point(rng)
        d = chordal(p, q)
        assert 0.0 <= d <= 2.0
        assert d == chordal(q, p)


def test_chordal_triangle_inequality(rng):
    pts = [rand_point(rng) for _ in range(30)] + [INF, SpherePoint(0j)]
    for _ in range(500):
        a, b, c = (pts[i] for i in rng.integers(0, len(pts), 3))
        assert chordal(a, c) <= chordal(a, b) + chordal(b, c) + 1e-12


def test_chordal_matches_embedding(rng):
    for _ in range(100):
        p, q = rand_point(rng), rand_point(rng)
        d3 = float(np.linalg.norm(p.embed() - q.embed()))
        assert chordal(p, q) == pytest.approx(d3, abs=1e-12)


def test_finite_point_rejects_nan():
    with pytest.raises(GeometryError):
        SpherePoint(complex("nan"))


# ---------------------------------------------------------------------------
# Moebius maps
# ---------------------------------------------------------------------------

def test_apply_examples():
    double = MoebiusMap.scaling(2)
    assert double.apply(1).z == 2
    assert double.apply(INF).is_inf
    pole = MoebiusMap(1, 0, 1, 1)  # z/(z+1)
    assert pole.apply(-1).is_inf
    assert pole.apply(INF).z == pytest.approx(1.0)


def test_compose_examples():
    double = MoebiusMap.scaling(2)
    shift = MoebiusMap.translation(1)
    comp = double @ shift
    assert comp.almost_equal(MoebiusMap(2, 2, 0, 1))
    m = MoebiusMap(3, 1 + 2j, 1j, 4)
    assert (m @ m.inverse()).is_identity(1e-12)


def test_compose_wandering_translation():
    # the two euclidean rotations of the wandering scene compose (rotation
    # about 0 after the other branch) to the translation z + (-1 + i)
    f = MoebiusMap.scaling(1j)
    g = MoebiusMap.affine(-1j, 1 + 1j)
    fg = f @ g
    assert fg.almost_equal(MoebiusMap.translation(-1 + 1j), 1e-12)
    gf = g @ f
    assert gf.almost_equal(MoebiusMap.translation(1 + 1j), 1e-12)


def test_group_action_soundness(rng):
    maps = [rand_map(rng) for _ in range(60)]
    pts = [rand_point(rng) for _ in range(20)]
    for _ in range(500):
        m1, m2 = (maps[i] for i in rng.integers(0, len(maps), 2))
        p = pts[int(rng.integers(0, len(pts)))]
        lhs = (m1 @ m2).apply(p)
        rhs = m1.apply(m2.apply(p))
        assert chordal(lhs, rhs) <= 1e-9


def test_normalization_det_one(rng):
    for _ in range(100):
        n = rand_map(rng)
        assert abs(n.det - 1.0) <= 1e-12


def test_classify_examples():
    lam = 0.95 * cmath.exp(2j * math.pi / 3)
    cls = MoebiusMap.scaling(lam).classify()
    assert cls.kind is MapKind.LOXODROMIC
    assert chordal(cls.attracting, 0) <= 1e-12

    cls = MoebiusMap.scaling(cmath.exp(2j * math.pi / 3)).classify()
    assert cls.kind is MapKind.ELLIPTIC
    fps = {("inf" if p.is_inf else p.z) for p in cls.fixed_points}
    assert "inf" in fps and 0j in fps

    cls = MoebiusMap(1, 0, 1, 1).classify()
    assert cls.kind is MapKind.PARABOLIC
    assert chordal(cls.fixed_points[0], 0) <= 1e-12

    assert MoebiusMap.identity().classify().kind is MapKind.IDENTITY
    assert MoebiusMap.scaling(2).classify().kind is MapKind.HYPERBOLIC


def test_classify_rejects_degenerate():
    with pytest.raises(GeometryError):
        MoebiusMap(1, 2, 2, 4)


def test_classification_dynamics_oracle(rng):
    """Attracting fixed points attract; elliptic orbits stay on circles."""
    n_lox = n_ell = 0
    while n_lox < 120 or n_ell < 120:
        elliptic = n_ell < 120 and bool(rng.integers(0, 2))
        m = rand_map(rng, elliptic=elliptic)
        cls = m.classify()
        p = rand_point(rng)
        if cls.kind in (MapKind.HYPERBOLIC, MapKind.LOXODROMIC):
            # 200 iterations resolve 1e-6 only when the contraction rate is
            # bounded away from 1 (error ~ |multiplier|^n)
            if min(abs(mu) for mu in cls.multipliers) > 0.9:
                continue
            n_lox += 1
            q = p
            for _ in range(200):
                q = m.apply(q)
            assert chordal(q, cls.attracting) <= 1e-6
        elif cls.kind is MapKind.ELLIPTIC:
            n_ell += 1
            # conjugate fixed points to {0, inf}: orbit radius is constant
            a, b = cls.fixed_points
            conj = _send_to_zero_inf(a, b)
            q = conj.apply(p)
            if q.is_inf or chordal(q, 0) < 1e-3 or 2 - chordal(q, 0) < 1e-3:
                continue
            radii = []
            for _ in range(64):
                q = (conj @ m @ conj.inverse()).apply(q)
                radii.append(abs(q.z))
            assert max(radii) - min(radii) <= 1e-6 * max(radii)


def _send_to_zero_inf(a, b):
    if a.is_inf:
        return MoebiusMap(0, 1, 1, -b.z)
    if b.is_inf:
        return MoebiusMap(1, -a.z, 0, 1)
    return MoebiusMap(1, -a.z, 1, -b.z)


# ---------------------------------------------------------------------------
# generalized circles
# ---------------------------------------------------------------------------

def test_circle_canonical_form():
    c = GenCircle(2.0, -4.0 + 0j, 6.0)
    assert c.a == 1.0 and c.b == pytest.approx(-2.0) and c.d == pytest.approx(3.0)
    line = GenCircle.real_axis()
    assert line.is_line
    assert abs(line.b) == pytest.approx(1.0)
    # canonicalization is idempotent
    again = GenCircle(c.a, c.b, c.d)
    assert again.key() == c.key()


def test_circle_nondegeneracy():
    with pytest.raises(GeometryError):
        GenCircle(1.0, 0j, 1.0)  # |b|^2 - ad = -1


def test_circle_sides_and_contains():
    unit = GenCircle.unit_circle()
    assert unit.side(0) == -1
    assert unit.side(3) == 1
    assert unit.side(1) == 0
    assert unit.side(INF) == 1
    axis = GenCircle.real_axis()
    assert axis.side(INF) == 0
    assert axis.side(1j) != axis.side(-1j)


def test_map_circle_examples():
    unit = GenCircle.unit_circle()
    doubled = unit.transform(MoebiusMap.scaling(2))
    assert doubled.center == pytest.approx(0) and doubled.radius == pytest.approx(2)
    inverted = unit.transform(MoebiusMap(0, 1, 1, 0))
    assert inverted.same_locus(unit)
    shifted = unit.transform(MoebiusMap.translation(1 - 1j))
    assert shifted.center == pytest.approx(1 - 1j)
    assert shifted.radius == pytest.approx(1.0)


def test_circle_transport_and_congruence(rng):
    for _ in range(50):
        m = rand_map(rng)
        circle = GenCircle.circle(complex(*rng.standard_normal(2)),
                                  float(rng.uniform(0.2, 3.0)))
        image = circle.transform(m)
        for p in circle.sample(64):
            assert abs(image.form(m.apply(p))) <= 1e-9
        back = image.transform(m.inverse())
        assert back.same_locus(circle, 1e-9)


def test_line_through_infinity():
    axis = GenCircle.real_axis()
    image = axis.transform(MoebiusMap.scaling(1j))  # rotate: imaginary axis
    assert image.is_line
    assert abs(image.form(INF)) <= 1e-12
    # inversion sends the real axis to itself, a vertical line to a circle
    vertical = GenCircle.line(1.0, 1j)
    circ = vertical.transform(MoebiusMap(0, 1, 1, 0))
    assert not circ.is_line
    assert abs(circ.form(SpherePoint(1 + 0j))) <= 1e-9  # 1 on line -> 1


def test_circle_intersections():
    unit = GenCircle.unit_circle()
    assert unit.intersect(GenCircle.circle(3, 1)) == []
    tang = unit.intersect(GenCircle.circle(2, 1))
    assert len(tang) == 1 and chordal(tang[0], 1) <= 1e-9
    cross = unit.intersect(GenCircle.real_axis())
    vals = sorted(p.z.real for p in cross)
    assert vals == pytest.approx([-1.0, 1.0])
    with pytest.raises(GeometryError):
        unit.intersect(GenCircle.unit_circle())


def test_line_line_intersections():
    real = GenCircle.real_axis()
    imag = GenCircle.line(0, 1j)
    pts = real.intersect(imag)
    assert any(p.is_inf for p in pts)
    finite = [p for p in pts if not p.is_inf]
    assert len(finite) == 1 and chordal(finite[0], 0) <= 1e-12
    parallel = GenCircle.line(1j, 1.0)
    pts = real.intersect(parallel)
    assert len(pts) == 1 and pts[0].is_inf


def test_dist_point():
    unit = GenCircle.unit_circle()
    assert unit.dist_point(SpherePoint(1 + 0j)) <= 1e-12
    assert unit.dist_point(SpherePoint(0j)) == pytest.approx(chordal(0, 1), abs=1e-12)


# ---------------------------------------------------------------------------
# arcs
# ---------------------------------------------------------------------------

def test_arc_invariants():
    circle = GenCircle.circle(1 + 1j, 0.75)
    arc = Arc.from_endpoints(circle, circle.point_at(0.3), circle.point_at(2.1))
    p, q = arc.endpoints()
    assert abs(circle.form(p)) <= 1e-9
    assert abs(circle.form(q)) <= 1e-9
    assert abs(circle.form(arc.midpoint())) <= 1e-9
    other = Arc.from_endpoints(circle, circle.point_at(0.3), circle.point_at(2.1),
                               ccw=False)
    assert other.delta == pytest.approx(2 * math.pi - arc.delta)


def test_arc_transform_consistency(rng):
    for _ in range(40):
        m = rand_map(rng)
        circle = GenCircle.circle(complex(*rng.standard_normal(2)),
                                  float(rng.uniform(0.3, 2.0)))
        arc = Arc(circle, float(rng.uniform(0, 2 * math.pi)),
                  float(rng.uniform(0.2, 5.0)))
        image = arc.transform(m)
        for t in np.linspace(0, 1, 17):
            q = m.apply(arc.point_at_fraction(float(t)))
            assert abs(image.circle.form(q)) <= 1e-8
        # midpoint of the image lies on the image arc
        mid = m.apply(arc.midpoint())
        rel = (image.circle.param_of(mid) - image.phi0) % (2 * math.pi)
        assert rel <= image.delta + 1e-6


def test_arc_sampling_density():
    unit = GenCircle.unit_circle()
    full = Arc.full_circle(unit)
    pts = full.sample_chordal(4.0 / full.chordal_length())
    assert len(pts) >= 4
    assert all(abs(unit.form(p)) <= 1e-9 for p in pts)
    dense = full.sample_chordal(200.0)
    gaps = [chordal(dense[i], dense[i + 1]) for i in range(len(dense) - 1)]
    assert max(gaps) <= 1.0 / 200.0 + 1e-6


def test_line_arc_sampling_passes_infinity():
    axis = GenCircle.real_axis()
    full = Arc.full_circle(axis)
    pts = full.sample_chordal(50.0)
    assert all(p.is_inf or abs(p.z.imag) <= 1e-9 for p in pts)
    assert max(chordal(pts[i], pts[i + 1]) for i in range(len(pts) - 1)) <= 0.021
