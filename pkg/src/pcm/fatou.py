"""Raster-based Fatou component detection and classification.

Pixels are colored by the exact K-prefix of their itinerary; components are
4-connected flood fills of equal-prefix, uncontaminated pixels.  A periodic
component's return map is the branch composition along its cycle; the cycle
length is the smallest multiple of the itinerary period that brings the
representative back to the same pixel component (an itinerary may repeat
before the component does, e.g. when a power of the return word is a
symmetry of the cell but not of the component).

Connectivity is viewport-relative: enclosed complement regions are holes,
a second chart around infinity (w = 1/z) resolves components that leave the
viewport, and a geometric cascade of shrinking holes near the resolution
limit is reported as ">= threshold", never as a number.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .piecewise import ItinerarySeq, PiecewiseMap, detect_periodicity, iterate_grid
from .sphere import INF, MapKind, MoebiusMap, SpherePoint, as_point

FOUR_CONN = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)
EIGHT_CONN = np.ones((3, 3), dtype=bool)


def _n_threads() -> int:
    env = os.environ.get("PCM_THREADS", "").strip()
    if env:
        return max(1, int(env))
    return max(1, os.cpu_count() or 1)


# ---------------------------------------------------------------------------
# Viewports (plane chart and the chart around infinity)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Viewport:
    x0: float
    x1: float
    y0: float
    y1: float
    chart: str = "plane"  # "plane": pixel = z; "inverse": pixel = w, z = 1/w

    def __post_init__(self):
        if not (self.x1 > self.x0 and self.y1 > self.y0):
            raise ValueError("empty viewport")
        if self.chart not in ("plane", "inverse"):
            raise ValueError(f"unknown chart {self.chart!r}")

    def pixel_size(self, width: int, height: int) -> tuple[float, float]:
        return (self.x1 - self.x0) / width, (self.y1 - self.y0) / height

    def grid(self, width: int, height: int) -> tuple[np.ndarray, np.ndarray]:
        """Homogeneous coordinate arrays (num, den) of all pixel centers."""
        dx, dy = self.pixel_size(width, height)
        xs = self.x0 + dx * (np.arange(width) + 0.5)
        ys = self.y1 - dy * (np.arange(height) + 0.5)
        w = xs[None, :] + 1j * ys[:, None]
        if self.chart == "plane":
            return w.astype(complex), np.ones_like(w, dtype=complex)
        return np.ones_like(w, dtype=complex), w.astype(complex)

    def pixel_center(self, i: int, j: int, width: int, height: int) -> SpherePoint:
        dx, dy = self.pixel_size(width, height)
        w = complex(self.x0 + dx * (j + 0.5), self.y1 - dy * (i + 0.5))
        if self.chart == "plane":
            return SpherePoint(w)
        return INF if w == 0 else SpherePoint(1.0 / w)

    def to_pixel(self, p, width: int, height: int) -> tuple[int, int] | None:
        """Pixel (row, col) containing p, or None if outside the chart."""
        p = as_point(p)
        if self.chart == "plane":
            if p.is_inf:
                return None
            w = p.z
        else:
            w = 0j if p.is_inf else (1.0 / p.z if p.z != 0 else None)
            if w is None:
                return None
        dx, dy = self.pixel_size(width, height)
        j = int(math.floor((w.real - self.x0) / dx))
        i = int(math.floor((self.y1 - w.imag) / dy))
        if 0 <= i < height and 0 <= j < width:
            return i, j
        return None

    def contains_origin(self) -> bool:
        return self.x0 < 0.0 < self.x1 and self.y0 < 0.0 < self.y1


# ---------------------------------------------------------------------------
# Itinerary grids
# ---------------------------------------------------------------------------

@dataclass
class ItineraryGrid:
    viewport: Viewport
    width: int
    height: int
    prefix_len: int
    n_symbols: int
    codes: np.ndarray          # (H, W) int64, injective on observed prefixes
    contaminated: np.ndarray   # (H, W) bool
    packed: bool
    prefix_table: dict[int, tuple[int, ...]] = field(default_factory=dict)

    def prefix_of(self, code: int) -> tuple[int, ...]:
        if not self.packed:
            return self.prefix_table[int(code)]
        out = []
        c = int(code)
        for _ in range(self.prefix_len):
            c, s = divmod(c, self.n_symbols)
            out.append(s)
        return tuple(reversed(out))


def raster_itineraries(pw: PiecewiseMap, viewport: Viewport, width: int,
                       height: int, prefix_len: int,
                       tol: float = 1e-9) -> ItineraryGrid:
    """Exact K-prefix per pixel center, plus boundary-contamination flags."""
    if prefix_len < 1 or width < 16 or height < 16:
        raise ValueError("need prefix_len >= 1 and resolution >= 16x16")
    num, den = viewport.grid(width, height)
    m = pw.n_regions

    threads = _n_threads()
    bands = np.array_split(np.arange(height), min(threads, height))
    symbols = np.zeros((prefix_len, height, width), dtype=np.uint8)
    contaminated = np.zeros((height, width), dtype=bool)

    def run_band(rows):
        s, c, _ = iterate_grid(pw, num[rows], den[rows], prefix_len, tol)
        symbols[:, rows] = s
        contaminated[rows] = c

    if len(bands) == 1:
        run_band(bands[0])
    else:
        with ThreadPoolExecutor(max_workers=len(bands)) as pool:
            list(pool.map(run_band, bands))

    packed = m ** prefix_len < 2 ** 62
    if packed:
        codes = np.zeros((height, width), dtype=np.int64)
        for k in range(prefix_len):
            codes = codes * m + symbols[k]
        table: dict[int, tuple[int, ...]] = {}
    else:
        flat = symbols.reshape(prefix_len, -1).T
        uniq, inverse = np.unique(flat, axis=0, return_inverse=True)
        codes = inverse.reshape(height, width).astype(np.int64)
        table = {i: tuple(int(x) for x in row) for i, row in enumerate(uniq)}
    return ItineraryGrid(viewport, width, height, prefix_len, m, codes,
                         contaminated, packed, table)


# ---------------------------------------------------------------------------
# Components
# ---------------------------------------------------------------------------

@dataclass
class Component:
    id: int
    code: int
    prefix: tuple[int, ...]
    area: int
    bbox: tuple[int, int, int, int]  # (i0, i1, j0, j1) half-open
    rep_pixel: tuple[int, int]
    rep: SpherePoint
    touches_border: bool


def components(grid: ItineraryGrid, min_pixels: int = 4
               ) -> tuple[np.ndarray, list[Component]]:
    """4-connected flood fill of equal-prefix uncontaminated pixels.

    Returns (labels, reports); labels is (H, W) with -1 for discarded pixels.
    Components smaller than `min_pixels` are dropped as unresolved.
    """
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import connected_components as cs_components

    h, w = grid.codes.shape
    n_pix = h * w
    codes = grid.codes
    valid = ~grid.contaminated
    idx = np.arange(n_pix).reshape(h, w)

    def edges(a_sl, b_sl):
        ok = (codes[a_sl] == codes[b_sl]) & valid[a_sl] & valid[b_sl]
        return idx[a_sl][ok], idx[b_sl][ok]

    r1, c1 = edges(np.s_[:, :-1], np.s_[:, 1:])
    r2, c2 = edges(np.s_[:-1, :], np.s_[1:, :])
    rows = np.concatenate([r1, r2])
    cols = np.concatenate([c1, c2])
    adj = coo_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)),
                     shape=(n_pix, n_pix))
    _, raw = cs_components(adj, directed=False)
    raw = raw.reshape(h, w).astype(np.int64)
    raw[~valid] = -1

    flat = raw.ravel()
    keep_mask = flat >= 0
    if not keep_mask.any():
        return np.full((h, w), -1, dtype=np.int64), []
    positions = np.nonzero(keep_mask)[0]
    labs, first_in_compressed = np.unique(flat[keep_mask], return_index=True)
    first_pos = positions[first_in_compressed]
    areas = np.bincount(flat[keep_mask])

    big = areas[labs] >= min_pixels
    kept = labs[big][np.argsort(first_pos[big])]  # row-major first appearance

    lut = np.full(int(flat.max()) + 1, -1, dtype=np.int64)
    lut[kept] = np.arange(len(kept))
    labels = np.where(raw >= 0, lut[np.maximum(raw, 0)], -1)

    slices = ndimage.find_objects(raw + 1)
    comps: list[Component] = []
    for cid, r in enumerate(kept):
        sl = slices[int(r)]
        bbox = (sl[0].start, sl[0].stop, sl[1].start, sl[1].stop)
        rep_pixel = _interior_pixel_from_crop(raw[sl] == r, bbox[0], bbox[2])
        touches = bool(bbox[0] == 0 or bbox[1] == h or bbox[2] == 0 or bbox[3] == w)
        fp = int(first_pos[labs == r][0])
        code = int(codes.ravel()[fp])
        comps.append(Component(
            id=cid,
            code=code,
            prefix=grid.prefix_of(code),
            area=int(areas[r]),
            bbox=bbox,
            rep_pixel=rep_pixel,
            rep=grid.viewport.pixel_center(*rep_pixel, grid.width, grid.height),
            touches_border=touches,
        ))
    return labels, comps


def _interior_pixel_from_crop(crop_mask: np.ndarray, i0: int, j0: int) -> tuple[int, int]:
    """Pixel of the mask farthest from its complement (deterministic argmax)."""
    crop = np.pad(crop_mask, 1)
    dist = ndimage.distance_transform_edt(crop)
    flat = int(np.argmax(dist))
    ci, cj = np.unravel_index(flat, crop.shape)
    return i0 + int(ci) - 1, j0 + int(cj) - 1


# ---------------------------------------------------------------------------
# Classification (Theorem on periodic regularity components)
# ---------------------------------------------------------------------------

@dataclass
class ClassifiedComponent:
    component: Component
    case: str                      # ia ib iia iib iii identity wandering-suspect
    preperiod: int | None
    period: int | None             # component period (multiple of itinerary period)
    return_map: MoebiusMap | None
    return_kind: str | None
    fixed_points_inside: int
    fixed_point_location: str      # interior | boundary | outside | n/a
    confident: bool
    notes: str = ""


def classify_component(pw: PiecewiseMap, grid: ItineraryGrid, labels: np.ndarray,
                       comp: Component, itinerary_len: int = 96,
                       max_multiple: int = 12,
                       boundary_pixels: float = 2.0,
                       chart_cache: dict | None = None) -> ClassifiedComponent:
    itin = pw.itinerary(comp.rep, itinerary_len)
    found = detect_periodicity(itin.symbols)
    if found is None:
        return ClassifiedComponent(comp, "wandering-suspect", None, None,
                                   None, None, 0, "n/a", True)
    pre, q = found
    orbit = pw.orbit(comp.rep, pre + max_multiple * q)
    cycle_pixel = grid.viewport.to_pixel(orbit[pre], grid.width, grid.height)
    cycle_id = labels[cycle_pixel] if cycle_pixel is not None else -1

    period = None
    for mult in range(1, max_multiple + 1):
        p = grid.viewport.to_pixel(orbit[pre + mult * q], grid.width, grid.height)
        if p is not None and cycle_id >= 0 and labels[p] == cycle_id:
            period = mult * q
            break
    confident = period is not None
    if period is None:
        period = q

    word = pw.branch_word(itin.symbols[pre:pre + period])
    cls = word.classify()

    if cls.kind is MapKind.IDENTITY:
        return ClassifiedComponent(comp, "identity", pre, period, word,
                                   cls.kind.value, 0, "n/a", confident)

    locations = [_fixed_point_location(pw, grid, labels, cycle_id, fp,
                                       boundary_pixels, chart_cache)
                 for fp in cls.fixed_points]
    inside = sum(loc == "interior" for loc in locations)

    if cls.kind is MapKind.PARABOLIC:
        case = "iib"
        loc = locations[0]
        confident = confident and loc == "boundary"
    elif cls.is_loxodromic_like:
        loc = locations[cls.fixed_points.index(cls.attracting)]
        if loc == "interior":
            case = "ia"
        else:
            case = "iia"
            confident = confident and loc == "boundary"
    else:  # elliptic
        if inside >= 1:
            case = "ib"
            loc = "interior"
        else:
            case = "iii"
            loc = locations[0] if locations else "outside"
            confident = confident and all(l == "outside" for l in locations)
    notes = ""
    if cls.kind is MapKind.ELLIPTIC and inside == 2:
        notes = "both fixed points inside"
    return ClassifiedComponent(comp, case, pre, period, word, cls.kind.value,
                               inside, loc, confident, notes)


def _fixed_point_location(pw: PiecewiseMap, grid: ItineraryGrid,
                          labels: np.ndarray, comp_id: int, fp: SpherePoint,
                          boundary_pixels: float,
                          chart_cache: dict | None = None) -> str:
    """interior / boundary / outside relative to the component's pixel set."""
    if comp_id < 0:
        return "outside"
    if fp.is_inf and grid.viewport.chart == "plane":
        return _infinity_location(pw, grid, labels, comp_id, chart_cache=chart_cache)
    pix = grid.viewport.to_pixel(fp, grid.width, grid.height)
    if pix is None:
        return "outside"
    if labels[pix] == comp_id:
        return "interior"
    r = int(math.ceil(boundary_pixels))
    i0, j0 = pix
    h, w = labels.shape
    window = labels[max(0, i0 - r):i0 + r + 1, max(0, j0 - r):j0 + r + 1]
    ii, jj = np.nonzero(window == comp_id)
    if len(ii):
        di = ii + max(0, i0 - r) - i0
        dj = jj + max(0, j0 - r) - j0
        if np.min(np.hypot(di, dj)) <= boundary_pixels:
            return "boundary"
    return "outside"


def _infinity_location(pw: PiecewiseMap, grid: ItineraryGrid,
                       labels: np.ndarray, comp_id: int,
                       res: int = 256, chart_cache: dict | None = None) -> str:
    """Decide whether infinity belongs to the component via the w = 1/z chart."""
    vp = grid.viewport
    if not vp.contains_origin():
        return "outside"
    rho = min(vp.x1, -vp.x0, vp.y1, -vp.y0)
    wmax = 1.25 / rho
    wvp = Viewport(-wmax, wmax, -wmax, wmax, chart="inverse")
    key = ("wchart", res, grid.prefix_len, round(wmax, 12))
    if chart_cache is not None and key in chart_cache:
        wgrid = chart_cache[key]
    else:
        wgrid = raster_itineraries(pw, wvp, res, res, grid.prefix_len)
        if chart_cache is not None:
            chart_cache[key] = wgrid
    comp_code = None
    ids = np.unique(labels[labels == comp_id])
    if len(ids) == 0:
        return "outside"
    comp_mask = labels == comp_id
    comp_code = grid.codes[comp_mask].flat[0]

    center = wvp.to_pixel(INF, res, res)
    if center is None or wgrid.codes[center] != comp_code or wgrid.contaminated[center]:
        return "outside"
    wmask = (wgrid.codes == comp_code) & ~wgrid.contaminated
    wlab, _ = ndimage.label(wmask, structure=FOUR_CONN)
    inf_label = wlab[center]
    if inf_label == 0:
        return "outside"
    # connectivity through the overlap ring rho/1.25 <= |z| <= rho
    ring = np.argwhere(wlab == inf_label)
    for i, j in ring[:: max(1, len(ring) // 512)]:
        p = wvp.pixel_center(int(i), int(j), res, res)
        if p.is_inf:
            continue
        if rho / 1.25 <= abs(p.z) <= rho:
            zpix = vp.to_pixel(p, grid.width, grid.height)
            if zpix is not None and labels[zpix] == comp_id:
                return "interior"
    return "outside"


# ---------------------------------------------------------------------------
# Connectivity
# ---------------------------------------------------------------------------

@dataclass
class ConnectivityReport:
    value: int
    exact: bool
    display: str
    holes: int

    def __str__(self):
        return self.display


def connectivity(pw: PiecewiseMap, grid: ItineraryGrid, labels: np.ndarray,
                 comp: Component, threshold: int = 20,
                 unresolved_area: int = 32,
                 decay_ratio: float = 1.8) -> ConnectivityReport:
    """Hole count + 1, resolved across the plane and around-infinity charts.

    A cascade of at least three enclosed holes shrinking geometrically to
    the resolution limit is taken as evidence of infinite connectivity and
    reported as ">= threshold".
    """
    mask = labels == comp.id
    holes, edge_clusters = _holes(mask)
    areas = sorted(h.sum() for h in holes)

    if (len(areas) >= 3 and areas[0] <= unresolved_area
            and areas[1] >= decay_ratio * areas[0]
            and areas[2] >= decay_ratio * areas[1]):
        return ConnectivityReport(threshold, False, f">= {threshold}", len(holes))

    if not comp.touches_border:
        return ConnectivityReport(len(holes) + 1, True, str(len(holes) + 1), len(holes))

    new_w, resolved = _far_side_holes(pw, grid, labels, comp, holes)
    value = len(holes) + new_w
    exact = resolved and not edge_clusters
    if not resolved:
        value = len(holes) + 1
    display = str(value) if exact else f">= {value}"
    return ConnectivityReport(value, exact, display, len(holes))


def _holes(mask: np.ndarray) -> tuple[list[np.ndarray], int]:
    """Enclosed complement components (8-connected) and border-cluster count."""
    comp_lab, n = ndimage.label(~mask, structure=EIGHT_CONN)
    border = np.unique(np.concatenate([
        comp_lab[0], comp_lab[-1], comp_lab[:, 0], comp_lab[:, -1]]))
    border = set(int(b) for b in border if b != 0)
    holes = [comp_lab == k for k in range(1, n + 1) if k not in border]
    return holes, len(border)


def _far_side_holes(pw: PiecewiseMap, grid: ItineraryGrid, labels: np.ndarray,
                    comp: Component, z_holes: list[np.ndarray],
                    res: int = 512) -> tuple[int, bool]:
    """Count complement regions visible only beyond the plane viewport."""
    vp = grid.viewport
    if vp.chart != "plane" or not vp.contains_origin():
        return 0, False
    rho = min(vp.x1, -vp.x0, vp.y1, -vp.y0)
    wmax = 1.25 / rho
    wvp = Viewport(-wmax, wmax, -wmax, wmax, chart="inverse")
    wgrid = raster_itineraries(pw, wvp, res, res, grid.prefix_len)
    wmask = (wgrid.codes == comp.code) & ~wgrid.contaminated
    if not wmask.any():
        return 0, False
    wlab, n = ndimage.label(wmask, structure=FOUR_CONN)
    matched = set()
    for k in range(1, n + 1):
        pts = np.argwhere(wlab == k)
        for i, j in pts[:: max(1, len(pts) // 256)]:
            p = wvp.pixel_center(int(i), int(j), res, res)
            if p.is_inf:
                continue
            if rho / 1.25 <= abs(p.z) <= rho:
                zpix = vp.to_pixel(p, grid.width, grid.height)
                if zpix is not None and labels[zpix] == comp.id:
                    matched.add(k)
                    break
    if not matched:
        return 0, False
    umask = np.isin(wlab, sorted(matched))
    wholes, _ = _holes(umask)

    z_hole_union = np.zeros_like(labels, dtype=bool)
    for h in z_holes:
        z_hole_union |= h
    new = 0
    for hole in wholes:
        pts = np.argwhere(hole)
        already = False
        for i, j in pts[:: max(1, len(pts) // 64)]:
            p = wvp.pixel_center(int(i), int(j), res, res)
            if p.is_inf:
                continue
            zpix = vp.to_pixel(p, grid.width, grid.height)
            if zpix is not None and z_hole_union[zpix]:
                already = True
                break
        if not already:
            new += 1
    return new, True


# ---------------------------------------------------------------------------
# Fixed-column report
# ---------------------------------------------------------------------------

def component_report_lines(classified: list[ClassifiedComponent],
                           connectivities: dict[int, ConnectivityReport] | None = None
                           ) -> list[str]:
    """Columns: id rep_re rep_im period case holes area."""
    out = ["# id rep_re rep_im period case holes area"]
    for c in classified:
        rep = c.component.rep
        rep_re = "inf" if rep.is_inf else f"{rep.z.real:.9g}"
        rep_im = "inf" if rep.is_inf else f"{rep.z.imag:.9g}"
        period = "-" if c.period is None else str(c.period)
        holes = "-"
        if connectivities and c.component.id in connectivities:
            holes = str(connectivities[c.component.id].holes)
        out.append(f"{c.component.id} {rep_re} {rep_im} {period} {c.case} "
                   f"{holes} {c.component.area}")
    return out
