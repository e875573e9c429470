"""Hausdorff distance between sampled compacts and stability experiments.

Boundary deformations keep the branch maps fixed and move one boundary
circle through a parameter schedule; the probe tabulates the Hausdorff
drift of the level-N strata against the undeformed scene.  Structural
stability (same partition, perturbed maps) is probed by itinerary-grid
agreement plus per-level stratum drift plus the Schottky hypothesis check;
the result is reported as evidence, never as a proof of conjugacy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.spatial import cKDTree

from .kleinian import (LimitSetApprox, SchottkyPairing, directed_distance_min,
                       limit_set_approx, schottky_check)
from .piecewise import PiecewiseMap
from .prediscont import PointSample, pd_up_to

DEFAULT_DENSITY = 256.0


def as_xyz(cloud) -> np.ndarray:
    if isinstance(cloud, PointSample):
        return cloud.xyz
    if isinstance(cloud, LimitSetApprox):
        return cloud.xyz
    arr = np.asarray(cloud, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise ValueError("expected an (n, 3) array of unit-sphere coordinates")
    return arr


def directed_hausdorff(a, b) -> float:
    xa, xb = as_xyz(a), as_xyz(b)
    if len(xa) == 0 or len(xb) == 0:
        raise ValueError("Hausdorff distance needs nonempty sets")
    dist, _ = cKDTree(xb).query(xa, k=1)
    return float(np.max(dist))


def hausdorff(a, b) -> float:
    """Chordal Hausdorff distance between two sampled compacts."""
    return max(directed_hausdorff(a, b), directed_hausdorff(b, a))


# ---------------------------------------------------------------------------
# Boundary deformations
# ---------------------------------------------------------------------------

@dataclass
class DeformationSpec:
    """A one-parameter family of piecewise maps with fixed branches."""

    build: Callable[[float], PiecewiseMap]
    schedule: tuple[float, ...]
    label: str = ""

    def maps(self) -> list[tuple[float, PiecewiseMap]]:
        out = []
        for eps in self.schedule:
            pw = self.build(eps)
            pw.partition.validate(2000)
            out.append((eps, pw))
        return out


@dataclass
class ContinuityRow:
    eps: float
    drift: float
    boundary_gap: float


@dataclass
class ContinuityReport:
    rows: list[ContinuityRow]
    level: int
    label: str

    def lines(self) -> list[str]:
        out = [f"# continuity probe {self.label} at level {self.level}",
               "# eps drift boundary_gap"]
        for r in self.rows:
            out.append(f"{r.eps:.6g} {r.drift:.6f} {r.boundary_gap:.6f}")
        return out


def continuity_probe(spec: DeformationSpec, n_levels: int,
                     word_len: int = 8,
                     density: float = DEFAULT_DENSITY) -> ContinuityReport:
    """d_H(PD_N(F_eps), PD_N(F_0)) over the schedule, with the limit-set gap."""
    base = spec.build(0.0)
    base_cloud = pd_up_to(base, n_levels).cumulative_sample(density)
    limit = limit_set_approx(list(base.branches), word_len)
    rows = []
    for eps in spec.schedule:
        pw = spec.build(eps)
        cloud = pd_up_to(pw, n_levels).cumulative_sample(density)
        drift = hausdorff(cloud, base_cloud)
        boundary_pts = [p for c in pw.partition.circles() for p in c.sample(512)]
        gap = directed_distance_min(PointSample.from_points(boundary_pts),
                                    limit.sample)
        rows.append(ContinuityRow(eps, drift, gap))
    return ContinuityReport(rows, n_levels, spec.label)


# ---------------------------------------------------------------------------
# Structural stability probe (fixed partition, perturbed maps)
# ---------------------------------------------------------------------------

@dataclass
class StabilityReport:
    agreement: float
    drifts: list[tuple[int, float]]
    schottky_base: SchottkyPairing | None
    schottky_other: SchottkyPairing | None
    verdict: str

    def lines(self) -> list[str]:
        out = [f"itinerary agreement {self.agreement:.6f}"]
        for n, d in self.drifts:
            out.append(f"stratum {n} hausdorff drift {d:.6f}")
        out.append(f"schottky pairing base: {'found' if self.schottky_base else 'not detected'}")
        out.append(f"schottky pairing other: {'found' if self.schottky_other else 'not detected'}")
        out.append(f"verdict: {self.verdict}")
        return out


def structural_stability_probe(pw: PiecewiseMap, other: PiecewiseMap,
                               viewport, width: int, height: int, prefix_len: int,
                               n_levels: int = 6,
                               density: float = DEFAULT_DENSITY,
                               agreement_threshold: float = 0.99,
                               drift_threshold: float = 0.05) -> StabilityReport:
    """Compare two piecewise maps over the same partition."""
    from .fatou import raster_itineraries  # local import to avoid a cycle

    base_circles = {c.key() for c in pw.partition.circles()}
    other_circles = {c.key() for c in other.partition.circles()}
    if base_circles != other_circles:
        raise ValueError("structural stability compares maps over the same boundary")

    g1 = raster_itineraries(pw, viewport, width, height, prefix_len)
    g2 = raster_itineraries(other, viewport, width, height, prefix_len)
    valid = ~(g1.contaminated | g2.contaminated)
    agreement = float(np.mean(g1.codes[valid] == g2.codes[valid])) if valid.any() else 0.0

    r1 = pd_up_to(pw, n_levels)
    r2 = pd_up_to(other, n_levels)
    drifts = []
    for n in range(n_levels + 1):
        a = r1.cumulative_sample(density, upto=n)
        b = r2.cumulative_sample(density, upto=n)
        drifts.append((n, hausdorff(a, b)))

    boundary = pw.partition.circles()[0]
    s1 = schottky_check(pw.branches[0], pw.branches[1], boundary) \
        if len(pw.branches) == 2 else None
    s2 = schottky_check(other.branches[0], other.branches[1], boundary) \
        if len(other.branches) == 2 else None

    hypothesis = bool(s1 and s1.boundary_inside_fundamental
                      and s2 and s2.boundary_inside_fundamental)
    consistent = (agreement >= agreement_threshold
                  and drifts[-1][1] <= drift_threshold)
    if hypothesis and consistent:
        verdict = "consistent with conjugacy (not a proof)"
    elif not hypothesis:
        verdict = "schottky hypothesis not verified; agreement not asserted"
    else:
        verdict = "hypothesis holds but drift/agreement outside thresholds"
    return StabilityReport(agreement, drifts, s1, s2, verdict)
