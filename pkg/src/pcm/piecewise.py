"""Sphere partitions, piecewise Moebius maps, orbits and itineraries.

A Region is a conjunction of circle-side constraints; a Partition is an
ordered list of regions covering the sphere, with points on a boundary
assigned to the lowest-index matching region (so itineraries are well
defined everywhere; boundary hits carry a flag so tests can exclude them).
Itinerary symbols are indexed from k = 0: symbol k is the region containing
the k-th iterate of the starting point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PartitionError
from .sphere import INF, TOL, MoebiusMap, GenCircle, SpherePoint, as_point

NEGATIVE = -1
POSITIVE = 1


# ---------------------------------------------------------------------------
# Quasi-uniform sphere samples (Fibonacci lattice through stereographic chart)
# ---------------------------------------------------------------------------

def sphere_samples(n: int) -> list[SpherePoint]:
    """n deterministic quasi-uniform points of the sphere (incl. near-infinity)."""
    golden = (1.0 + math.sqrt(5.0)) / 2.0
    out: list[SpherePoint] = []
    for k in range(n):
        z3 = 1.0 - 2.0 * (k + 0.5) / n
        theta = 2.0 * math.pi * ((k / golden) % 1.0)
        r = math.sqrt(max(0.0, 1.0 - z3 * z3))
        x, y = r * math.cos(theta), r * math.sin(theta)
        if 1.0 - z3 < 1e-12:
            out.append(INF)
        else:
            out.append(SpherePoint(complex(x, y) / (1.0 - z3)))
    return out


# ---------------------------------------------------------------------------
# Regions and partitions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Region:
    """Points whose form sign matches `side` for every listed circle."""

    constraints: tuple[tuple[GenCircle, int], ...]
    label: int
    witness: SpherePoint | None = None

    def contains(self, p, tol: float = TOL) -> tuple[bool, bool]:
        """(matches under closure, touches a constraint circle)."""
        on_boundary = False
        for circle, side in self.constraints:
            s = circle.side(p, tol)
            if s == 0:
                on_boundary = True
            elif s != side:
                return False, on_boundary
        return True, on_boundary

    def contains_strict(self, p, tol: float = TOL) -> bool:
        return all(circle.side(p, tol) == side for circle, side in self.constraints)


@dataclass(frozen=True)
class Partition:
    regions: tuple[Region, ...]

    def __post_init__(self):
        if not self.regions:
            raise PartitionError("a partition needs at least one region")

    def circles(self) -> list[GenCircle]:
        """Distinct constraint circles (the discontinuity set of the scene)."""
        seen: dict[tuple, GenCircle] = {}
        for region in self.regions:
            for circle, _ in region.constraints:
                seen.setdefault(circle.key(), circle)
        return list(seen.values())

    def locate(self, p, tol: float = TOL) -> tuple[int, bool]:
        """Index of the containing region; lowest index wins on boundaries."""
        p = as_point(p)
        for idx, region in enumerate(self.regions):
            ok, boundary = region.contains(p, tol)
            if ok:
                return idx, boundary
        # numeric crack: fall back to the least-violating region, flagged
        best, best_violation = 0, math.inf
        for idx, region in enumerate(self.regions):
            violation = max(
                (abs(c.form(p)) for c, s in region.constraints if c.side(p, tol) not in (0, s)),
                default=0.0,
            )
            if violation < best_violation:
                best, best_violation = idx, violation
        return best, True

    def on_discontinuity(self, p, tol: float = TOL) -> bool:
        return any(c.contains(p, tol) for c in self.circles())

    def validate(self, samples: int = 10_000, tol: float = TOL) -> None:
        """Coverage and disjointness on a quasi-uniform sample set."""
        for p in sphere_samples(samples):
            strict_hits = sum(r.contains_strict(p, tol) for r in self.regions)
            if strict_hits > 1:
                raise PartitionError(f"regions overlap near {p!r}")
            if strict_hits == 0:
                closed_hits = sum(r.contains(p, tol)[0] for r in self.regions)
                if closed_hits == 0:
                    raise PartitionError(f"coverage gap near {p!r}")
        for region in self.regions:
            witness = region.witness
            if witness is not None and not region.contains_strict(witness, tol):
                raise PartitionError(f"stored witness of region {region.label} is not interior")

    @staticmethod
    def from_sides(circles: list[GenCircle], side_table: list[list[tuple[int, int]]],
                   find_witnesses: bool = True) -> Partition:
        """Regions given as lists of (circle index, side) pairs."""
        regions = []
        for label, constraints in enumerate(side_table):
            cons = tuple((circles[i], side) for i, side in constraints)
            witness = None
            if find_witnesses:
                witness = _find_witness(cons)
            regions.append(Region(cons, label, witness))
        return Partition(tuple(regions))


def _find_witness(constraints, tries: int = 4000) -> SpherePoint | None:
    for p in sphere_samples(tries):
        if all(c.side(p) == s for c, s in constraints):
            return p
    return None


def two_region_partition(circle: GenCircle, first_side: int = NEGATIVE) -> Partition:
    """The classic scene: region 0 is one side of a single circle."""
    return Partition.from_sides(
        [circle], [[(0, first_side)], [(0, -first_side)]]
    )


# ---------------------------------------------------------------------------
# Itineraries
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ItinerarySeq:
    """Finite symbol sequence with boundary flags and observed periodicity."""

    symbols: tuple[int, ...]
    boundary: tuple[bool, ...]
    preperiod: int | None = None
    period: int | None = None

    def __len__(self):
        return len(self.symbols)

    @property
    def clean(self) -> bool:
        return not any(self.boundary)

    def shifted(self) -> ItinerarySeq:
        return ItinerarySeq(self.symbols[1:], self.boundary[1:])

    def with_periodicity(self) -> ItinerarySeq:
        found = detect_periodicity(self.symbols)
        if found is None:
            return self
        return ItinerarySeq(self.symbols, self.boundary, found[0], found[1])


def detect_periodicity(symbols, max_period: int | None = None) -> tuple[int, int] | None:
    """Smallest (preperiod, period) visible in the observed window.

    A period q is accepted when the tail from the last violation onward
    satisfies s[k] == s[k+q], covers at least 3q symbols, and starts in the
    first half of the window (otherwise a long aperiodic prefix ending in a
    locally repetitive stretch, as wandering itineraries produce, would be
    misread as eventually periodic).  This is an observation, not a proof.
    """
    s = tuple(symbols)
    n = len(s)
    if n < 8:
        return None
    limit = max_period if max_period is not None else n // 3
    for q in range(1, max(1, limit) + 1):
        p = 0
        for k in range(n - q - 1, -1, -1):
            if s[k] != s[k + q]:
                p = k + 1
                break
        if n - p >= 3 * q and p <= n // 2:
            return p, q
    return None


# ---------------------------------------------------------------------------
# Piecewise maps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PiecewiseMap:
    partition: Partition
    branches: tuple[MoebiusMap, ...]

    def __post_init__(self):
        if len(self.branches) != len(self.partition.regions):
            raise PartitionError("one branch map per region is required")

    @property
    def n_regions(self) -> int:
        return len(self.branches)

    def locate(self, p, tol: float = TOL) -> tuple[int, bool]:
        return self.partition.locate(p, tol)

    def eval(self, p, tol: float = TOL) -> SpherePoint:
        idx, _ = self.partition.locate(p, tol)
        return self.branches[idx].apply(p)

    def __call__(self, p) -> SpherePoint:
        return self.eval(p)

    def orbit(self, p, n: int, tol: float = TOL) -> list[SpherePoint]:
        pts = [as_point(p)]
        for _ in range(n):
            pts.append(self.eval(pts[-1], tol))
        return pts

    def itinerary(self, p, k: int, tol: float = TOL) -> ItinerarySeq:
        if k < 1:
            raise ValueError("itinerary length must be >= 1")
        symbols, boundary = [], []
        current = as_point(p)
        for _ in range(k):
            idx, on_b = self.partition.locate(current, tol)
            symbols.append(idx)
            boundary.append(on_b)
            current = self.branches[idx].apply(current)
        return ItinerarySeq(tuple(symbols), tuple(boundary))

    def branch_word(self, symbols) -> MoebiusMap:
        """Composition of branches along a symbol block (first symbol applied first)."""
        word = MoebiusMap.identity()
        for s in symbols:
            word = self.branches[s].compose(word)
        return word


# ---------------------------------------------------------------------------
# Vectorized evaluation over homogeneous coordinate arrays
# ---------------------------------------------------------------------------

def _region_masks(pw: PiecewiseMap, num: np.ndarray, den: np.ndarray,
                  tol: float) -> tuple[np.ndarray, np.ndarray]:
    """(region index array, boundary-proximity array) for homogeneous points."""
    norm = np.abs(num) ** 2 + np.abs(den) ** 2
    idx = np.full(num.shape, -1, dtype=np.int8)
    near = np.zeros(num.shape, dtype=bool)

    form_cache: dict[tuple, np.ndarray] = {}

    def form_of(circle: GenCircle) -> np.ndarray:
        k = circle.key(12)
        if k not in form_cache:
            val = (
                circle.a * np.abs(num) ** 2
                + 2.0 * (circle.b * np.conj(num) * den).real
                + circle.d * np.abs(den) ** 2
            ) / norm
            form_cache[k] = val
        return form_cache[k]

    for circle in pw.partition.circles():
        near |= np.abs(form_of(circle)) <= tol

    for r_idx, region in enumerate(pw.partition.regions):
        match = idx < 0
        for circle, side in region.constraints:
            f = form_of(circle)
            ok = np.abs(f) <= tol
            ok |= (f < 0) if side == NEGATIVE else (f > 0)
            match &= ok
        idx[match] = r_idx
    # numeric cracks: give them to region 0 and flag
    cracks = idx < 0
    if cracks.any():
        idx[cracks] = 0
        near |= cracks
    return idx.astype(np.int64), near


def iterate_grid(pw: PiecewiseMap, num: np.ndarray, den: np.ndarray, steps: int,
                 tol: float = TOL, keep_tail: int = 0):
    """Iterate homogeneous point arrays, recording symbols and boundary hits.

    Returns (symbols[steps, ...], contaminated_mask, tail) where `tail`
    holds the last `keep_tail` iterates as (num, den) pairs.
    """
    num = num.astype(complex).copy()
    den = den.astype(complex).copy()
    symbols = np.zeros((steps,) + num.shape, dtype=np.uint8)
    contaminated = np.zeros(num.shape, dtype=bool)
    tail: list[tuple[np.ndarray, np.ndarray]] = []
    for k in range(steps):
        idx, near = _region_masks(pw, num, den, tol)
        symbols[k] = idx
        contaminated |= near
        new_num = np.empty_like(num)
        new_den = np.empty_like(den)
        for r_idx, branch in enumerate(pw.branches):
            m = idx == r_idx
            if not m.any():
                continue
            new_num[m] = branch.a * num[m] + branch.b * den[m]
            new_den[m] = branch.c * num[m] + branch.d * den[m]
        scale = np.maximum(np.abs(new_num), np.abs(new_den))
        scale[scale == 0.0] = 1.0
        num = new_num / scale
        den = new_den / scale
        if keep_tail and k >= steps - keep_tail:
            tail.append((num.copy(), den.copy()))
    return symbols, contaminated, tail
