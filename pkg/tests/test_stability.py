import math

import numpy as np
import pytest

from pcm.prediscont import PointSample, pd_up_to
from pcm.scenes import gallery, schottky_scene
from pcm.sphere import Arc, GenCircle, INF, SpherePoint, chordal
from pcm.stability import (continuity_probe, directed_hausdorff, hausdorff,
                           structural_stability_probe)


def cloud(*zs):
    return PointSample.from_points([SpherePoint.of(z) for z in zs])


def test_hausdorff_examples():
    a = cloud(0, 1, 1j)
    assert hausdorff(a, a) == 0.0
    assert hausdorff(cloud(0), PointSample.from_points([INF])) == pytest.approx(2.0)


def test_hausdorff_concentric_circles():
    # closed form: concentric circles at radii 1 and 1.1 under the chordal
    # metric are chordal(r, 1.1r)-apart pointwise along rays
    r1, r2 = 1.0, 1.1
    gap = chordal(r1, r2)
    a = PointSample.from_points(Arc.full_circle(GenCircle.circle(0, r1))
                                .sample_chordal(600))
    b = PointSample.from_points(Arc.full_circle(GenCircle.circle(0, r2))
                                .sample_chordal(600))
    d = hausdorff(a, b)
    assert abs(d - gap) <= 2.0 / 600.0


def test_hausdorff_rejects_empty():
    with pytest.raises(ValueError):
        hausdorff(cloud(0), PointSample())


def test_metric_axioms_on_samples(rng):
    sets = [cloud(*(complex(*p) for p in rng.standard_normal((5, 2))))
            for _ in range(12)]
    for _ in range(200):
        a, b, c = (sets[i] for i in rng.integers(0, len(sets), 3))
        dab, dba = hausdorff(a, b), hausdorff(b, a)
        assert dab == dba  # symmetry is exact
        assert hausdorff(a, c) <= dab + hausdorff(b, c) + 1e-12


def test_monotone_refinement(whole_sphere):
    result = pd_up_to(whole_sphere, 3)
    coarse = result.cumulative_sample(32.0)
    fine = result.cumulative_sample(128.0)
    base = result.cumulative_sample(256.0)
    d_coarse = hausdorff(coarse, base)
    d_fine = hausdorff(fine, base)
    assert d_fine <= d_coarse + 1e-12
    assert d_coarse <= 2.0 / 32.0  # bounded by the sampling gap


def test_continuity_probe_zero_eps():
    scene = gallery("fig_spidstable")
    spec = scene.deformation_spec()
    spec = type(spec)(spec.build, (0.0,), spec.label)
    report = continuity_probe(spec, 4)
    assert report.rows[0].drift == pytest.approx(0.0, abs=1e-12)


def test_continuity_probe_stable_family():
    report = continuity_probe(gallery("fig_spidstable").deformation_spec(), 6)
    drifts = [r.drift for r in report.rows]
    assert all(a > b for a, b in zip(drifts, drifts[1:]))
    assert all(r.boundary_gap > 0.1 for r in report.rows)
    # halving eps at least halves the drift up to a factor 4 (sanity band)
    for (e1, d1), (e2, d2) in zip([(r.eps, r.drift) for r in report.rows],
                                  [(r.eps, r.drift) for r in report.rows][1:]):
        ratio = d1 / d2
        assert 1.0 <= ratio <= 8.0


def test_structural_stability_identical_maps():
    scene = gallery("fig_schottky")
    pw = scene.pieces()
    report = structural_stability_probe(pw, pw, scene.viewport, 128, 128, 10, 3)
    assert report.agreement == 1.0
    assert all(d == pytest.approx(0.0, abs=1e-12) for _, d in report.drifts)


def test_structural_stability_perturbed():
    scene = gallery("fig_schottky")
    report = structural_stability_probe(scene.pieces(),
                                        schottky_scene(0.61).pieces(),
                                        scene.viewport, 256, 256, 16, 4)
    assert report.agreement >= 0.99
    assert report.drifts[-1][1] <= 0.05
    assert report.schottky_base is not None
    assert report.schottky_other is not None
    assert "consistent with conjugacy" in report.verdict


def test_structural_stability_requires_same_boundary():
    a = gallery("fig_schottky").pieces()
    b = gallery("fig_spidstable").pieces()
    with pytest.raises(ValueError):
        structural_stability_probe(a, b, gallery("fig_schottky").viewport,
                                   64, 64, 8, 2)
