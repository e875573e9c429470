import numpy as np
import pytest

from pcm.errors import PartitionError
from pcm.piecewise import (NEGATIVE, POSITIVE, Partition, PiecewiseMap,
                           Region, detect_periodicity, iterate_grid,
                           sphere_samples, two_region_partition)
from pcm.scenes import gallery
from pcm.sphere import INF, GenCircle, MoebiusMap, SpherePoint, chordal


def test_locate_whole_sphere(whole_sphere):
    assert whole_sphere.locate(0.5) == (0, False)
    assert whole_sphere.locate(3) == (1, False)
    assert whole_sphere.locate(1) == (0, True)  # lowest index wins on the circle
    assert whole_sphere.locate(INF) == (1, False)


def test_eval_examples(whole_sphere, wander):
    assert chordal(whole_sphere.eval(0.75), 1.5) <= 1e-12
    assert chordal(whole_sphere.eval(1.5), 1.0) <= 1e-12
    assert chordal(wander.eval(0.5 + 0.5j), 1.5 + 0.5j) <= 1e-12


def test_orbit_examples(whole_sphere, wander):
    orbit = whole_sphere.orbit(0.75, 2)
    assert [p.z for p in orbit] == pytest.approx([0.75, 1.5, 1.0])
    orbit = wander.orbit(0.5 + 0.5j, 3)
    assert [p.z for p in orbit] == pytest.approx(
        [0.5 + 0.5j, 1.5 + 0.5j, 1.5 - 0.5j, 0.5 + 1.5j])
    assert [p.z for p in whole_sphere.orbit(0.33, 0)] == [0.33]


def test_itinerary_wandering_cells(wander):
    assert wander.itinerary(0.5 + 0.5j, 9).symbols == (1, 1, 0, 1, 1, 0, 1, 0, 1)
    assert wander.itinerary(0.5 + 1.5j, 8).symbols == (1, 1, 0, 1, 0, 1, 1, 0)


def test_itinerary_formula_all_cells(wander):
    # symbol sequence (1, (1,0)^{n+1}, 1, (1,0)^{n+2}, ...) for the n-th cell
    for n in range(0, 6):
        k = 2 * n + 12
        expected = [1]
        block = n + 1
        while len(expected) < k:
            expected.extend([1, 0] * block)
            expected.append(1)
            block += 1
        seq = wander.itinerary(complex(0.5, n + 0.5), k)
        assert seq.symbols == tuple(expected[:k])
        assert not any(seq.boundary)


def test_itinerary_constant_prefix():
    pw = gallery("fig_itin").pieces()
    seq = pw.itinerary(-0.8 + 0.8j, 12)
    assert seq.symbols == (1,) * 12


def test_detect_periodicity_examples(wander):
    assert detect_periodicity([1] * 10) == (0, 1)
    assert detect_periodicity([0, 1, 1] * 4) == (0, 3)
    assert detect_periodicity(wander.itinerary(0.5 + 0.5j, 60).symbols) is None
    assert detect_periodicity([1, 1, 1]) is None  # window too short


def test_semiconjugacy(whole_sphere, rng):
    checked = 0
    for _ in range(2000):
        if checked >= 1000:
            break
        p = SpherePoint(complex(*rng.uniform(-2, 2, 2)))
        seq = whole_sphere.itinerary(p, 9)
        if not seq.clean:
            continue
        checked += 1
        shifted = whole_sphere.itinerary(whole_sphere.eval(p), 8)
        assert shifted.symbols == seq.symbols[1:]
    assert checked == 1000


def test_partition_validation():
    # regions that do not cover the sphere
    circle = GenCircle.unit_circle()
    bad = Partition.from_sides([circle], [[(0, NEGATIVE)]])
    with pytest.raises(PartitionError):
        bad.validate(2000)
    # overlapping regions
    overlap = Partition.from_sides([circle], [[(0, NEGATIVE)], [(0, NEGATIVE)],
                                              [(0, POSITIVE)]])
    with pytest.raises(PartitionError):
        overlap.validate(2000)
    good = two_region_partition(circle)
    good.validate(5000)


def test_locate_against_sign_oracle(whole_sphere):
    for p in sphere_samples(4000):
        idx, boundary = whole_sphere.locate(p)
        if boundary:
            continue
        strict = [i for i, r in enumerate(whole_sphere.partition.regions)
                  if r.contains_strict(p)]
        assert strict == [idx]


def test_coverage_samples_locate_uniquely(scenes):
    for scene in scenes.values():
        pw = scene.pieces()
        hits = 0
        for p in sphere_samples(1500):
            strict = sum(r.contains_strict(p) for r in pw.partition.regions)
            assert strict <= 1
            hits += strict
        assert hits >= 1400  # boundaries are measure zero


def test_euclidean_isometry_confinement(rng):
    """Bounded boundary + rotation at infinity + isometric branches keep a
    disc around the rotation center forward invariant."""
    circle = GenCircle.unit_circle()
    partition = Partition.from_sides([circle], [[(0, NEGATIVE)], [(0, POSITIVE)]])
    pw = PiecewiseMap(partition, (MoebiusMap.translation(0.3),
                                  MoebiusMap.scaling(np.exp(0.73j))))
    radius = 2.0
    for _ in range(500):
        z = complex(*rng.uniform(-1, 1, 2)) * radius / 1.5
        if abs(z) > radius:
            continue
        p = SpherePoint(z)
        for _ in range(200):
            p = pw.eval(p)
        assert not p.is_inf and abs(p.z) <= radius + 1e-9


def test_iterate_grid_matches_scalar(whole_sphere, rng):
    zs = np.array([complex(*rng.uniform(-2, 2, 2)) for _ in range(64)])
    num = zs.copy()
    den = np.ones_like(zs)
    symbols, contaminated, _ = iterate_grid(whole_sphere, num, den, 6)
    for i, z in enumerate(zs):
        seq = whole_sphere.itinerary(z, 6)
        if not contaminated[i]:
            assert tuple(symbols[:, i]) == seq.symbols


def test_boundary_flags_on_circle(whole_sphere):
    seq = whole_sphere.itinerary(1.0, 3)
    assert seq.boundary[0]
    assert seq.symbols[0] == 0
