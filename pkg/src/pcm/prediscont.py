"""Pre-discontinuity strata as word-labeled arc families.

Level 0 is the discontinuity set (the distinct boundary circles).  Each
pullback step maps every arc through an inverse branch, clips the image
against the branch's closed region, and files the surviving sub-arcs under
the word extended by the branch index.  Tangential clips contribute
isolated points, which are stored separately and excluded from arc
sampling.

Arcs that reproduce an arc already present at an earlier level (identity
branches do this every step) are dropped, so a shell holds only the
newly-appearing preimages; an empty shell therefore witnesses observed
stabilization, and the deepest shell is the finite-level stand-in for the
alpha-limit set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .errors import GeometryError, TruncationError
from .piecewise import PiecewiseMap, Region
from .sphere import TOL, TWO_PI, Arc, GenCircle, SpherePoint, embed_points

DEFAULT_ARC_BUDGET = 2_000_000


# ---------------------------------------------------------------------------
# Point samples (with unit-sphere embedding for metric work)
# ---------------------------------------------------------------------------

@dataclass
class PointSample:
    points: list[SpherePoint] = field(default_factory=list)
    xyz: np.ndarray = field(default_factory=lambda: np.zeros((0, 3)))

    @staticmethod
    def from_points(points) -> PointSample:
        pts = list(points)
        return PointSample(pts, embed_points(pts))

    def __len__(self):
        return len(self.points)

    @property
    def empty(self) -> bool:
        return len(self.points) == 0

    def merged_with(self, other: PointSample) -> PointSample:
        return PointSample(self.points + other.points,
                           np.vstack([self.xyz, other.xyz]))

    def dedup(self, eps: float = 1e-9) -> PointSample:
        if self.empty:
            return self
        keys = np.round(self.xyz / max(eps, 1e-15)).astype(np.int64)
        _, first = np.unique(keys, axis=0, return_index=True)
        order = np.sort(first)
        return PointSample([self.points[i] for i in order], self.xyz[order])


def directed_distance(a: PointSample, b: PointSample) -> float:
    """max over a of the chordal distance to the nearest point of b."""
    if a.empty or b.empty:
        raise ValueError("directed distance needs nonempty samples")
    tree = cKDTree(b.xyz)
    dist, _ = tree.query(a.xyz, k=1)
    return float(np.max(dist))


# ---------------------------------------------------------------------------
# Strata
# ---------------------------------------------------------------------------

@dataclass
class ArcStratum:
    """Level-n preimage cells: word (m_1 .. m_n) -> arcs inside region m_n."""

    level: int
    cells: dict[tuple[int, ...], list[Arc]]
    isolated: dict[tuple[int, ...], list[SpherePoint]]

    @property
    def n_arcs(self) -> int:
        return sum(len(v) for v in self.cells.values())

    @property
    def empty(self) -> bool:
        return self.n_arcs == 0 and not any(self.isolated.values())

    def all_arcs(self):
        for word in sorted(self.cells):
            for arc in self.cells[word]:
                yield word, arc

    def all_isolated(self):
        for word in sorted(self.isolated):
            for p in self.isolated[word]:
                yield word, p

    def sample(self, density: float) -> PointSample:
        pts: list[SpherePoint] = []
        for _, arc in self.all_arcs():
            pts.extend(arc.sample_chordal(density))
        return PointSample.from_points(pts)


def boundary_arcs(pw_or_partition) -> ArcStratum:
    """Level-0 stratum: the distinct boundary circles as full arcs."""
    partition = getattr(pw_or_partition, "partition", pw_or_partition)
    arcs = [Arc.full_circle(c) for c in partition.circles()]
    return ArcStratum(0, {(): arcs}, {(): []})


# ---------------------------------------------------------------------------
# Clipping
# ---------------------------------------------------------------------------

def clip_arc_to_region(arc: Arc, region: Region,
                       tol: float = TOL) -> tuple[list[Arc], list[SpherePoint]]:
    """Intersect an arc with a closed region; tangencies become isolated points."""
    cuts: list[float] = []
    for circle, _ in region.constraints:
        if circle.same_locus(arc.circle, tol):
            continue  # the arc lies on this constraint: the closure allows it
        for p in arc.circle.intersect(circle, tol):
            phi = arc.circle.param_of(p)
            rel = (phi - arc.phi0) % TWO_PI
            if arc.full or rel <= arc.delta + 1e-12:
                cuts.append(min(rel, arc.delta))

    cuts = sorted({round(c, 12) for c in cuts})
    if not cuts:
        ok, _ = region.contains(arc.midpoint(), tol)
        return ([arc], []) if ok else ([], [])

    base = arc
    if arc.full:
        # rebase a full circle at the first cut so intervals do not wrap
        shift = cuts[0]
        base = Arc(arc.circle, arc.phi0 + shift, TWO_PI)
        cuts = sorted({round((c - shift) % TWO_PI, 12) for c in cuts})

    inner = [c for c in cuts if 1e-12 < c < base.delta - 1e-12]
    bounds = [0.0] + inner + [base.delta]
    kept_flags: list[bool] = []
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        mid = base.circle.point_at((base.phi0 + 0.5 * (lo + hi)) % TWO_PI)
        ok, _ = region.contains(mid, tol)
        kept_flags.append(ok)

    kept: list[Arc] = []
    run_start: float | None = None
    for (lo, hi), ok in zip(zip(bounds[:-1], bounds[1:]), kept_flags):
        if ok and run_start is None:
            run_start = lo
        if not ok and run_start is not None:
            kept.append(Arc(base.circle, base.phi0 + run_start, lo - run_start))
            run_start = None
    if run_start is not None:
        if arc.full and kept_flags[0] and kept and run_start > 0.0:
            # wrap-around: splice the trailing run onto the leading one
            first = kept.pop(0)
            kept.append(Arc(base.circle, base.phi0 + run_start,
                            (base.delta - run_start) + first.delta))
        else:
            sweep = base.delta - run_start
            if abs(sweep - TWO_PI) < 1e-12:
                kept.append(Arc.full_circle(base.circle))
            else:
                kept.append(Arc(base.circle, base.phi0 + run_start, sweep))

    # cut points whose neighborhoods were discarded on both sides but which
    # themselves sit in the closed region are tangential touch points
    isolated: list[SpherePoint] = []
    n_seg = len(kept_flags)
    for j, c in enumerate(inner):
        if not kept_flags[j] and not kept_flags[j + 1]:
            p = base.circle.point_at((base.phi0 + c) % TWO_PI)
            ok, _ = region.contains(p, tol)
            if ok:
                isolated.append(p)
    if arc.full and n_seg >= 1 and not kept_flags[0] and not kept_flags[-1]:
        p = base.circle.point_at(base.phi0 % TWO_PI)
        ok, _ = region.contains(p, tol)
        if ok:
            isolated.append(p)
    return kept, isolated


# ---------------------------------------------------------------------------
# Pullback
# ---------------------------------------------------------------------------

def pullback_stratum(pw: PiecewiseMap, stratum: ArcStratum,
                     seen: set | None = None,
                     max_arcs: int = DEFAULT_ARC_BUDGET,
                     tol: float = TOL) -> ArcStratum:
    """One backward step: pull every cell through every branch and clip."""
    level = stratum.level + 1
    cells: dict[tuple[int, ...], list[Arc]] = {}
    isolated: dict[tuple[int, ...], list[SpherePoint]] = {}
    count = 0
    for m, branch in enumerate(pw.branches):
        inv = branch.inverse()
        region = pw.partition.regions[m]
        for word in sorted(stratum.cells):
            new_word = word + (m,)
            bucket: list[Arc] = []
            iso: list[SpherePoint] = []
            for arc in stratum.cells[word]:
                try:
                    image = arc.transform(inv)
                except GeometryError:
                    # the image circle contracted below double-precision
                    # representability: record the cell as a point
                    q = inv.apply(arc.midpoint())
                    ok, _ = region.contains(q, tol)
                    if ok:
                        iso.append(q)
                    continue
                sub, pts = clip_arc_to_region(image, region, tol)
                bucket.extend(sub)
                iso.extend(pts)
            for p in stratum.isolated.get(word, ()):
                q = inv.apply(p)
                ok, _ = region.contains(q, tol)
                if ok:
                    iso.append(q)
            local: set = set()
            out: list[Arc] = []
            for a in bucket:
                k = a.key()
                if k in local or (seen is not None and k in seen):
                    continue
                local.add(k)
                out.append(a)
            iso_out: list[SpherePoint] = []
            iso_seen: set = set()
            for p in iso:
                k = tuple(np.round(p.embed() / 1e-9).astype(np.int64))
                if k not in iso_seen:
                    iso_seen.add(k)
                    iso_out.append(p)
            if out:
                cells[new_word] = out
                count += len(out)
            if iso_out:
                isolated[new_word] = iso_out
            if count > max_arcs:
                raise TruncationError("arc", level, count, max_arcs)
    return ArcStratum(level, cells, isolated)


@dataclass
class PDResult:
    strata: list[ArcStratum]
    stabilized_at: int | None

    def cumulative_sample(self, density: float, upto: int | None = None) -> PointSample:
        pts: list[SpherePoint] = []
        for stratum in self.strata if upto is None else self.strata[: upto + 1]:
            for _, arc in stratum.all_arcs():
                pts.extend(arc.sample_chordal(density))
        return PointSample.from_points(pts).dedup(1e-9)


def pd_up_to(pw: PiecewiseMap, n_levels: int,
             max_arcs: int = DEFAULT_ARC_BUDGET,
             tol: float = TOL,
             check_density: float = 64.0) -> PDResult:
    """Strata 0..N with observed-stabilization detection.

    Stabilization is reported at the first n where the level-(n+1) shell is
    empty after dedup, or where its samples sit within 1e-8 (sampled
    Hausdorff) of the cumulative strata so far.
    """
    strata = [boundary_arcs(pw)]
    seen = {a.key() for _, a in strata[0].all_arcs()}
    stabilized_at: int | None = None
    for n in range(n_levels):
        nxt = pullback_stratum(pw, strata[-1], seen=seen, max_arcs=max_arcs, tol=tol)
        if stabilized_at is None and nxt.n_arcs == 0:
            stabilized_at = n
        elif stabilized_at is None and nxt.n_arcs <= 10_000:
            shell = nxt.sample(check_density)
            cumulative = PointSample.from_points(
                [p for s in strata for _, a in s.all_arcs()
                 for p in a.sample_chordal(check_density)]
            )
            if not shell.empty and not cumulative.empty:
                if directed_distance(shell, cumulative) <= 1e-8:
                    stabilized_at = n
        strata.append(nxt)
        for _, a in nxt.all_arcs():
            seen.add(a.key())
    return PDResult(strata, stabilized_at)


def sample_pd(pw: PiecewiseMap, n_levels: int, density: float,
              max_arcs: int = DEFAULT_ARC_BUDGET, tol: float = TOL) -> PointSample:
    """Deterministic arc-length-uniform samples of all strata up to N."""
    if density <= 0:
        raise ValueError("density must be positive")
    result = pd_up_to(pw, n_levels, max_arcs=max_arcs, tol=tol)
    return result.cumulative_sample(density)


def alpha_probe(pw: PiecewiseMap, n_levels: int, density: float = 256.0,
                max_arcs: int = DEFAULT_ARC_BUDGET, tol: float = TOL) -> PointSample:
    """Samples of the deepest shell only (finite stand-in for the alpha-limit)."""
    if n_levels < 1:
        raise ValueError("need at least one pullback level")
    result = pd_up_to(pw, n_levels, max_arcs=max_arcs, tol=tol)
    return result.strata[n_levels].sample(density).dedup(1e-9)


# ---------------------------------------------------------------------------
# Text export
# ---------------------------------------------------------------------------

def _fmt_point(p: SpherePoint) -> str:
    return "inf" if p.is_inf else f"{p.z.real:.12g},{p.z.imag:.12g}"


def export_strata_lines(strata: list[ArcStratum]) -> list[str]:
    """One line per arc / isolated point; columns:

    level word kind a b_re b_im d phi0 delta endpoint0 endpoint1
    (kind: full | arc | point; word: dot-joined branch indices, '-' for level 0)
    """
    lines = []
    for stratum in strata:
        for word, arc in stratum.all_arcs():
            w = ".".join(map(str, word)) if word else "-"
            c = arc.circle
            kind = "full" if arc.full else "arc"
            e0, e1 = arc.endpoints()
            lines.append(
                f"{stratum.level} {w} {kind} {c.a:.12g} {c.b.real:.12g} "
                f"{c.b.imag:.12g} {c.d:.12g} {arc.phi0:.12g} {arc.delta:.12g} "
                f"{_fmt_point(e0)} {_fmt_point(e1)}"
            )
        for word, p in stratum.all_isolated():
            w = ".".join(map(str, word)) if word else "-"
            lines.append(
                f"{stratum.level} {w} point 0 0 0 0 0 0 {_fmt_point(p)} {_fmt_point(p)}"
            )
    return lines
