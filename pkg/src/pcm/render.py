"""Deterministic raster rendering to binary PPM (P6).

Pixel color is a fixed 64-entry palette keyed by the itinerary-prefix code;
black is reserved for the pre-discontinuity overlay (and contaminated
pixels), red for detected periodic cycle points.  Identical scenes render
to byte-identical files regardless of thread count.
"""

from __future__ import annotations

import colorsys
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import TruncationError
from .fatou import (ClassifiedComponent, Viewport, classify_component,
                    components, raster_itineraries)
from .piecewise import PiecewiseMap
from .prediscont import pd_up_to
from .sphere import SpherePoint

BLACK = (0, 0, 0)
RED = (255, 0, 0)


def _build_palette() -> np.ndarray:
    colors = []
    for k in range(64):
        hue = ((20.0 + 137.508 * k) % 320.0 + 20.0) / 360.0
        sat = 0.55 if k % 2 == 0 else 0.40
        val = 0.95 if k % 3 else 0.72
        r, g, b = colorsys.hsv_to_rgb(hue, sat, val)
        colors.append((int(255 * r), int(255 * g), int(255 * b)))
    return np.array(colors, dtype=np.uint8)


PALETTE = _build_palette()


@dataclass
class RenderReport:
    scene_name: str
    width: int
    height: int
    n_components: int
    classified: list[ClassifiedComponent] = field(default_factory=list)
    cycle_points: list[SpherePoint] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)


def ppm_bytes(rgb: np.ndarray) -> bytes:
    h, w, _ = rgb.shape
    return b"P6\n%d %d\n255\n" % (w, h) + rgb.astype(np.uint8).tobytes()


# ---------------------------------------------------------------------------
# Arc rasterization
# ---------------------------------------------------------------------------

def _chart_coord(p: SpherePoint, chart: str) -> complex | None:
    if chart == "plane":
        return None if p.is_inf else p.z
    if p.is_inf:
        return 0j
    return None if p.z == 0 else 1.0 / p.z


def _segment_hits_box(w0: complex, w1: complex, x0, x1, y0, y1) -> bool:
    """Liang-Barsky test: does the straight chord w0-w1 meet the box?"""
    p = (-(w1.real - w0.real), w1.real - w0.real,
         -(w1.imag - w0.imag), w1.imag - w0.imag)
    q = (w0.real - x0, x1 - w0.real, w0.imag - y0, y1 - w0.imag)
    t_in, t_out = 0.0, 1.0
    for pi, qi in zip(p, q):
        if pi == 0.0:
            if qi < 0.0:
                return False
            continue
        t = qi / pi
        if pi < 0.0:
            t_in = max(t_in, t)
        else:
            t_out = min(t_out, t)
        if t_in > t_out:
            return False
    return True


def rasterize_arcs(arcs, viewport: Viewport, width: int, height: int,
                   max_depth: int = 26) -> np.ndarray:
    """Boolean mask of pixels within about half a pixel of an arc."""
    mask = np.zeros((height, width), dtype=bool)
    dx, dy = viewport.pixel_size(width, height)
    px = min(dx, dy)
    m = 2.0 * px
    bx0, bx1 = viewport.x0 - m, viewport.x1 + m
    by0, by1 = viewport.y0 - m, viewport.y1 + m

    def mark(w: complex):
        i = int(round((viewport.y1 - w.imag) / dy - 0.5))
        j = int(round((w.real - viewport.x0) / dx - 0.5))
        if 0 <= i < height and 0 <= j < width:
            mask[i, j] = True

    for arc in arcs:
        # seed with eighths: a full circle has equal endpoints, so a single
        # top-level segment would terminate immediately
        stack = [(k / 8.0, (k + 1) / 8.0, 0) for k in range(8)]
        coords: dict[float, complex | None] = {}

        def coord(t: float):
            if t not in coords:
                coords[t] = _chart_coord(arc.point_at_fraction(t), viewport.chart)
            return coords[t]

        while stack:
            t0, t1, depth = stack.pop()
            w0, w1 = coord(t0), coord(t1)
            if w0 is not None and w1 is not None:
                # chords of fine subdivisions track the arc closely enough
                # for box pruning at pixel accuracy
                if depth >= 3 and not _segment_hits_box(w0, w1, bx0, bx1, by0, by1):
                    continue
                step = math.hypot(w1.real - w0.real, w1.imag - w0.imag)
                if step <= 0.6 * px or depth >= max_depth:
                    mark(w0)
                    mark(w1)
                    continue
            else:
                # an endpoint at infinity: prune once the finite end has left
                # the box (the chart image recedes monotonically from there)
                finite = w1 if w0 is None else w0
                if depth >= 3 and finite is not None and not (
                        bx0 <= finite.real <= bx1 and by0 <= finite.imag <= by1):
                    continue
                if depth >= max_depth:
                    if finite is not None:
                        mark(finite)
                    continue
            tm = 0.5 * (t0 + t1)
            stack.append((t0, tm, depth + 1))
            stack.append((tm, t1, depth + 1))
    return mask


# ---------------------------------------------------------------------------
# Scene rendering
# ---------------------------------------------------------------------------

def render_scene(scene, width: int | None = None, height: int | None = None,
                 prefix_len: int | None = None, depth: int | None = None,
                 classify: bool | None = None) -> tuple[bytes, RenderReport]:
    """Render a Scene to PPM bytes plus a textual report."""
    pw = scene.pieces()
    w = width or scene.resolution[0]
    h = height or scene.resolution[1]
    k = prefix_len or scene.prefix_len
    n = scene.depth if depth is None else depth
    report = RenderReport(scene.name, w, h, 0)

    grid = raster_itineraries(pw, scene.viewport, w, h, k)
    if scene.render.component_coloring:
        rgb = PALETTE[(grid.codes % 64).astype(np.intp)].copy()
    else:
        rgb = np.full((h, w, 3), 230, dtype=np.uint8)
    rgb[grid.contaminated] = BLACK

    if scene.render.pd_overlay:
        strata, warn = _strata_with_fallback(pw, n)
        if warn:
            report.warnings.append(warn)
        arcs = [arc for stratum in strata for _, arc in stratum.all_arcs()]
        mask = rasterize_arcs(arcs, scene.viewport, w, h)
        rgb[mask] = BLACK

    want_classify = scene.render.periodic_markers if classify is None else classify
    if want_classify:
        labels, comps = components(grid)
        report.n_components = len(comps)
        seen_cycles = set()
        chart_cache: dict = {}
        for comp in comps:
            cc = classify_component(pw, grid, labels, comp, chart_cache=chart_cache)
            report.classified.append(cc)
            if cc.return_map is None or cc.case in ("identity", "wandering-suspect"):
                continue
            for fp in cc.return_map.classify().fixed_points:
                key = None if fp.is_inf else (round(fp.z.real, 9), round(fp.z.imag, 9))
                if key in seen_cycles:
                    continue
                seen_cycles.add(key)
                for q in pw.orbit(fp, (cc.period or 1) - 1):
                    report.cycle_points.append(q)
    if scene.render.periodic_markers:
        _stamp_markers(rgb, report.cycle_points, scene.viewport, w, h)

    return ppm_bytes(rgb), report


def _strata_with_fallback(pw: PiecewiseMap, depth: int):
    for n in range(depth, -1, -1):
        try:
            return pd_up_to(pw, n).strata, (
                None if n == depth
                else f"arc budget exceeded; overlay truncated to level {n}")
        except TruncationError:
            continue
    return [], "arc budget exceeded at level 0"


def _stamp_markers(rgb: np.ndarray, points, viewport: Viewport,
                   width: int, height: int) -> None:
    h, w, _ = rgb.shape
    for p in points:
        pix = viewport.to_pixel(p, width, height)
        if pix is None:
            continue
        i0, j0 = pix
        for di in (-1, 0, 1):
            for dj in (-1, 0, 1):
                i, j = i0 + di, j0 + dj
                if 0 <= i < h and 0 <= j < w:
                    rgb[i, j] = RED
