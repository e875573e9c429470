import cmath
import math

import numpy as np
import pytest

from pcm.errors import TruncationError
from pcm.kleinian import (alpha_limit_probe, enumerate_words, limit_set_approx,
                          omega_limit_probe, schottky_check)
from pcm.prediscont import PointSample, directed_distance
from pcm.scenes import gallery, schottky_branches
from pcm.sphere import GenCircle, MapKind, MoebiusMap, SpherePoint, chordal


def fuchsian_generators():
    pw = gallery("fig_spidstable").pieces()
    return list(pw.branches)


def test_enumerate_words_counts():
    one = [MoebiusMap.scaling(2)]
    assert len(enumerate_words(one, 3)) == 6
    two = [MoebiusMap.scaling(2), MoebiusMap.translation(1)]
    assert len(enumerate_words(two, 1)) == 4
    assert len(enumerate_words(two, 2)) == 16  # 4 + 4*3


def test_enumerate_words_reduced():
    two = [MoebiusMap.scaling(2), MoebiusMap.translation(1)]
    for word in enumerate_words(two, 4):
        for (i, e), (j, f) in zip(word.letters, word.letters[1:]):
            assert not (i == j and e == -f)


def test_word_budget():
    two = [MoebiusMap.scaling(2), MoebiusMap.translation(1)]
    with pytest.raises(TruncationError):
        enumerate_words(two, 10, max_words=50)


def test_word_homomorphism(rng):
    gens = fuchsian_generators()
    words = enumerate_words(gens, 4)
    pts = [SpherePoint(complex(*rng.standard_normal(2))) for _ in range(5)]
    for _ in range(200):
        u, v = (words[i] for i in rng.integers(0, len(words), 2))
        product = u.map @ v.map
        for p in pts:
            assert chordal(product.apply(p), u.map.apply(v.map.apply(p))) <= 1e-8


def test_limit_set_elementary():
    ls = limit_set_approx([MoebiusMap.scaling(2)], 4)
    for p in ls.points:
        assert p.is_inf or chordal(p, 0) <= 1e-9


def test_limit_set_fuchsian_on_unit_circle():
    ls = limit_set_approx(fuchsian_generators(), 8)
    assert len(ls) > 100
    for p in ls.points:
        assert not p.is_inf
        assert abs(abs(p.z) - 1.0) <= 1e-6


def test_limit_set_invariance():
    # g . fix(w) = fix(g w g^-1), a word two letters longer before reduction
    gens = fuchsian_generators()
    eps = 1e-6
    shallow = limit_set_approx(gens, 5, dedup_eps=eps)
    deeper = limit_set_approx(gens, 7, dedup_eps=eps)
    for g in gens:
        moved = PointSample.from_points([g.apply(p) for p in shallow.points])
        assert directed_distance(moved, deeper.sample) <= max(2 * eps, 1e-7)


def test_schottky_check_family():
    f, g = schottky_branches(0.6)
    boundary = GenCircle.circle(1j, 0.5)
    pairing = schottky_check(f, g, boundary)
    assert pairing is not None
    assert pairing.boundary_inside_fundamental
    centers = sorted(str(np.round(c.center, 6)) for c in pairing.circles)
    assert len(set(centers)) == 4
    # exterior-to-interior: 64 boundary samples verified inside schottky_check;
    # spot-check the map across a pairing
    c1, c2 = pairing.circles[0], pairing.circles[1]
    image = f.apply(pairing.basepoint)
    assert c2.side(image) == pairing.interior_sides[1]


def test_schottky_rejects_affine_and_elliptic():
    assert schottky_check(MoebiusMap.scaling(2), MoebiusMap.scaling(2)) is None
    rot = MoebiusMap.scaling(cmath.exp(1j))
    assert schottky_check(rot, MoebiusMap.scaling(2)) is None


def test_schottky_not_detected_for_fuchsian():
    f, g = fuchsian_generators()
    assert schottky_check(f, g, GenCircle.circle(0, 2.0)) is None


def test_schottky_ping_pong_freeness(rng):
    f, g = schottky_branches(0.6)
    pairing = schottky_check(f, g, GenCircle.circle(1j, 0.5))
    base = pairing.basepoint
    assert pairing.in_fundamental_region(SpherePoint(1j))
    words = enumerate_words([f, g], 8, max_words=200_000)
    idx = rng.integers(0, len(words), 500)
    for i in idx:
        w = words[int(i)]
        image = w.map.apply(SpherePoint(1j))
        assert not pairing.in_fundamental_region(image)


def test_alpha_probe_stable_scene():
    pw = gallery("fig_spidstable").pieces()
    report = alpha_limit_probe(pw, 10, 8)
    assert report.boundary_gap > 0.1
    assert report.deepest is not None and report.deepest <= 0.1


def test_alpha_probe_unstable_hypothesis_fails():
    pw = gallery("fig_spidunstable").pieces()
    report = alpha_limit_probe(pw, 6, 8)
    assert report.boundary_gap < 0.02


def test_alpha_probe_elementary_scene():
    pw = gallery("fig_conn_left").pieces()
    report = alpha_limit_probe(pw, 8, 6)
    # stabilized: shells beyond level 3 are empty
    assert report.shell_distances[-1][1] is None


def test_omega_probe(rng):
    pw = gallery("fig_spidstable").pieces()
    seeds = [complex(*pair) for pair in rng.uniform(-2.2, 2.2, size=(40, 2))]
    report = omega_limit_probe(pw, seeds, 1500, 8)
    assert report.max_directed <= 0.05


def test_omega_probe_fixed_seed():
    pw = gallery("fig_attr").pieces()
    cls = pw.branches[0].classify()
    report = omega_limit_probe(pw, [cls.attracting], 600, 6)
    assert report.max_directed <= 1e-9
