"""The group generated by the branch maps: words, limit sets, Schottky checks.

The limit set is approximated from inside by the attracting (or parabolic)
fixed points of all freely reduced words up to a length bound.  Schottky
pairings are searched among isometric circles; because isometric circles
are basepoint-dependent (two maps sending infinity to the same point have
concentric inverse isometric circles), the search conjugates the basepoint
to a few deterministic candidate positions and maps the circles back.
Failure to find a pairing is reported as absence, never as a proof that the
group is not Schottky.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import TruncationError
from .piecewise import PiecewiseMap, iterate_grid
from .prediscont import PointSample, directed_distance, pd_up_to
from .sphere import (INF, TOL, GenCircle, MapKind, MoebiusMap, SpherePoint,
                     as_point)

DEFAULT_WORD_BUDGET = 500_000


# ---------------------------------------------------------------------------
# Words
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GroupWord:
    """Freely reduced word; letters are (generator index, +1 | -1)."""

    letters: tuple[tuple[int, int], ...]
    map: MoebiusMap

    def __len__(self):
        return len(self.letters)


def _letter_maps(gens: list[MoebiusMap]) -> list[tuple[tuple[int, int], MoebiusMap]]:
    out = []
    for i, g in enumerate(gens):
        out.append(((i, 1), g.normalized()))
        out.append(((i, -1), g.inverse()))
    return out


def enumerate_words(gens: list[MoebiusMap], max_len: int,
                    max_words: int = DEFAULT_WORD_BUDGET) -> list[GroupWord]:
    """All freely reduced words of length 1..max_len, in lexicographic order."""
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    letters = _letter_maps(gens)
    words: list[GroupWord] = []
    frontier = [GroupWord((letter,), m) for letter, m in letters]
    words.extend(frontier)
    for _ in range(max_len - 1):
        nxt: list[GroupWord] = []
        for w in frontier:
            last = w.letters[-1]
            for letter, m in letters:
                if letter[0] == last[0] and letter[1] == -last[1]:
                    continue
                nxt.append(GroupWord(w.letters + (letter,), w.map.compose(m)))
                if len(words) + len(nxt) > max_words:
                    raise TruncationError("group word", len(w.letters) + 1,
                                          len(words) + len(nxt), max_words)
        words.extend(nxt)
        frontier = nxt
    return words


# ---------------------------------------------------------------------------
# Limit set approximation
# ---------------------------------------------------------------------------

@dataclass
class LimitSetApprox:
    points: list[SpherePoint]
    xyz: np.ndarray
    word_length: int
    dedup_eps: float

    def __len__(self):
        return len(self.points)

    @property
    def sample(self) -> PointSample:
        return PointSample(self.points, self.xyz)


def limit_set_approx(gens: list[MoebiusMap], max_len: int,
                     dedup_eps: float = 1e-4,
                     max_words: int = DEFAULT_WORD_BUDGET) -> LimitSetApprox:
    """Attracting/parabolic fixed points of all non-elliptic words up to max_len."""
    pts: list[SpherePoint] = []
    for word in enumerate_words(gens, max_len, max_words):
        cls = word.map.classify()
        if cls.kind in (MapKind.IDENTITY, MapKind.ELLIPTIC):
            continue
        if cls.kind is MapKind.PARABOLIC:
            pts.append(cls.fixed_points[0])
        else:
            pts.append(cls.attracting)
    sample = PointSample.from_points(pts).dedup(dedup_eps)
    return LimitSetApprox(sample.points, sample.xyz, max_len, dedup_eps)


# ---------------------------------------------------------------------------
# Schottky pairing via isometric circles
# ---------------------------------------------------------------------------

@dataclass
class SchottkyPairing:
    """Circles (C1, C2, C3, C4): f maps ext C1 into int C2, g maps ext C3 into int C4."""

    circles: tuple[GenCircle, GenCircle, GenCircle, GenCircle]
    interior_sides: tuple[int, int, int, int]
    basepoint: SpherePoint
    boundary_inside_fundamental: bool | None = None

    def in_fundamental_region(self, p, tol: float = TOL) -> bool:
        """The fundamental region is the common exterior of the four circles."""
        for circle, inside in zip(self.circles, self.interior_sides):
            s = circle.side(p, tol)
            if s == inside or s == 0:
                return False
        return True


def _isometric_circle(m: MoebiusMap) -> tuple[complex, float] | None:
    n = m.normalized()
    if abs(n.c) < 1e-12:
        return None
    return (-n.d / n.c, 1.0 / abs(n.c))


def _euclid_disjoint(circles: list[tuple[complex, float]], tol: float = 1e-9) -> bool:
    for i in range(len(circles)):
        for j in range(i + 1, len(circles)):
            ci, ri = circles[i]
            cj, rj = circles[j]
            if abs(ci - cj) <= ri + rj + tol:
                return False
    return True


def _conjugator(basepoint: SpherePoint) -> MoebiusMap:
    """Map sending `basepoint` to infinity (identity when already infinity)."""
    if basepoint.is_inf:
        return MoebiusMap.identity()
    return MoebiusMap(0, 1, 1, -basepoint.z)


def _candidate_basepoints(f: MoebiusMap, g: MoebiusMap,
                          boundary: GenCircle | None) -> list[SpherePoint]:
    cands: list[SpherePoint] = [INF]
    if boundary is not None:
        if boundary.is_line:
            cands.append(SpherePoint(boundary.line_point))
        else:
            cands.append(SpherePoint(boundary.center))
    finite_fps = [p.z for m in (f, g) for p in m.classify().fixed_points if not p.is_inf]
    if finite_fps:
        mean = sum(finite_fps) / len(finite_fps)
        cands.append(SpherePoint(mean))
        cands.append(SpherePoint(mean + 1.0))
    return cands


def schottky_check(f: MoebiusMap, g: MoebiusMap,
                   boundary: GenCircle | None = None,
                   samples: int = 64, tol: float = 1e-7) -> SchottkyPairing | None:
    """Look for a classical Schottky pairing on (conjugated) isometric circles.

    Returns the pairing with the four circles in original coordinates, or
    None when no candidate basepoint yields four circles with disjoint
    closed interiors and verified exterior-to-interior mapping.
    """
    for kind in (f.classify().kind, g.classify().kind):
        if kind in (MapKind.IDENTITY, MapKind.ELLIPTIC, MapKind.PARABOLIC):
            return None
    for basepoint in _candidate_basepoints(f, g, boundary):
        h = _conjugator(basepoint)
        hinv = h.inverse()
        conj = [h.compose(m).compose(hinv) for m in (f, f.inverse(), g, g.inverse())]
        iso = [_isometric_circle(m) for m in conj]
        if any(c is None for c in iso):
            continue
        if not _euclid_disjoint(iso):
            continue
        circles = []
        interior_sides = []
        for center, radius in iso:
            chart_circle = GenCircle.circle(center, radius)
            back = chart_circle.transform(hinv)
            interior_probe = hinv.apply(SpherePoint(center))
            side = back.side(interior_probe)
            if side == 0:
                break
            circles.append(back)
            interior_sides.append(side)
        if len(circles) != 4:
            continue
        if not _verify_pairing(f, g, circles, interior_sides, basepoint, samples, tol):
            continue
        pairing = SchottkyPairing(tuple(circles), tuple(interior_sides),
                                  basepoint)
        if boundary is not None:
            pairing.boundary_inside_fundamental = all(
                pairing.in_fundamental_region(p)
                for p in boundary.sample(2 * samples)
            )
        return pairing
    return None


def _verify_pairing(f, g, circles, sides, basepoint, samples, tol) -> bool:
    pairs = [(f, circles[0], circles[1], sides[1]),
             (f.inverse(), circles[1], circles[0], sides[0]),
             (g, circles[2], circles[3], sides[3]),
             (g.inverse(), circles[3], circles[2], sides[2])]
    for m, src, dst, dst_inside in pairs:
        for k in range(samples):
            p = src.point_at(2.0 * math.pi * k / samples)
            if dst.dist_point(m.apply(p)) > tol:
                return False
        image = m.apply(basepoint)
        if dst.side(image) != dst_inside:
            return False
    return True


# ---------------------------------------------------------------------------
# Alpha / omega probes against the limit set
# ---------------------------------------------------------------------------

@dataclass
class AlphaProbeReport:
    shell_distances: list[tuple[int, float | None]]
    boundary_gap: float
    limit_set: LimitSetApprox
    hypothesis_margin: float

    @property
    def deepest(self) -> float | None:
        return self.shell_distances[-1][1]

    def lines(self) -> list[str]:
        out = [f"boundary-to-limit-set distance {self.boundary_gap:.6f}"]
        for n, d in self.shell_distances:
            label = "empty" if d is None else f"{d:.6f}"
            out.append(f"shell {n:3d} directed distance {label}")
        return out


def alpha_limit_probe(pw: PiecewiseMap, n_levels: int, word_len: int,
                      density: float = 256.0, dedup_eps: float = 1e-4,
                      boundary_samples: int = 512) -> AlphaProbeReport:
    """Directed distances of the deepest shells to the limit-set approximation."""
    if n_levels < 1:
        raise ValueError("need at least one level")
    limit = limit_set_approx(list(pw.branches), word_len, dedup_eps)
    result = pd_up_to(pw, n_levels)
    levels = list(range(max(1, n_levels - 3), n_levels + 1))
    rows: list[tuple[int, float | None]] = []
    for n in levels:
        shell = result.strata[n].sample(density)
        if shell.empty or len(limit) == 0:
            rows.append((n, None))
        else:
            rows.append((n, directed_distance(shell, limit.sample)))
    boundary_pts = [p for c in pw.partition.circles()
                    for p in c.sample(boundary_samples)]
    boundary = PointSample.from_points(boundary_pts)
    gap = directed_distance_min(boundary, limit.sample) if len(limit) else math.inf
    return AlphaProbeReport(rows, gap, limit, gap)


def directed_distance_min(a: PointSample, b: PointSample) -> float:
    """min over a of the chordal distance to the nearest point of b."""
    from scipy.spatial import cKDTree

    if a.empty or b.empty:
        raise ValueError("need nonempty samples")
    tree = cKDTree(b.xyz)
    dist, _ = tree.query(a.xyz, k=1)
    return float(np.min(dist))


@dataclass
class OmegaProbeReport:
    max_directed: float
    per_seed: list[float]
    limit_set: LimitSetApprox


def omega_limit_probe(pw: PiecewiseMap, seeds, n_iter: int, word_len: int,
                      dedup_eps: float = 1e-4,
                      cluster_eps: float = 1e-3) -> OmegaProbeReport:
    """Orbit-tail accumulation points against the limit-set approximation."""
    if n_iter < 2:
        raise ValueError("need at least two iterations")
    seeds = [as_point(s) for s in seeds]
    limit = limit_set_approx(list(pw.branches), word_len, dedup_eps)
    keep = max(1, n_iter // 5)
    num = np.array([s.homogeneous()[0] for s in seeds], dtype=complex)
    den = np.array([s.homogeneous()[1] for s in seeds], dtype=complex)
    _, _, tail = iterate_grid(pw, num, den, n_iter, keep_tail=keep)
    per_seed: list[float] = []
    for i in range(len(seeds)):
        pts = [SpherePoint.from_homogeneous(nn[i], dd[i]) for nn, dd in tail]
        cluster = PointSample.from_points(pts).dedup(cluster_eps)
        per_seed.append(directed_distance(cluster, limit.sample))
    return OmegaProbeReport(max(per_seed), per_seed, limit)
