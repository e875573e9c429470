"""Scene configuration, JSON round-tripping, and the built-in gallery.

A scene is a sphere partition (circles + per-region sides), one Moebius
branch per region, a viewport, raster parameters, and render toggles.
Viewports are artifact choices picked to frame the interesting dynamics;
anchors mark points whose components the verification suites inspect.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field, replace

from .errors import PartitionError, SceneError
from .fatou import Viewport
from .piecewise import NEGATIVE, POSITIVE, Partition, PiecewiseMap
from .sphere import INF, GenCircle, MoebiusMap, SpherePoint
from .stability import DeformationSpec


@dataclass(frozen=True)
class RenderOptions:
    pd_overlay: bool = True
    periodic_markers: bool = True
    component_coloring: bool = True


@dataclass(frozen=True)
class Anchor:
    point: SpherePoint
    label: str


@dataclass(frozen=True)
class Deformation:
    circle_index: int
    param: str                  # "radius" | "center_x" | "center_y"
    schedule: tuple[float, ...]


@dataclass(frozen=True)
class Scene:
    name: str
    description: str
    circles: tuple[GenCircle, ...]
    constraints: tuple[tuple[tuple[int, int], ...], ...]  # per region: (circle idx, side)
    branches: tuple[MoebiusMap, ...]
    viewport: Viewport
    resolution: tuple[int, int] = (1024, 1024)
    prefix_len: int = 24
    depth: int = 8
    render: RenderOptions = RenderOptions()
    anchors: tuple[Anchor, ...] = ()
    deformation: Deformation | None = None
    output: str | None = None

    def partition(self) -> Partition:
        return Partition.from_sides(list(self.circles),
                                    [list(c) for c in self.constraints])

    def pieces(self) -> PiecewiseMap:
        return PiecewiseMap(self.partition(), self.branches)

    def validated(self, samples: int = 10_000) -> Scene:
        try:
            self.partition().validate(samples)
        except PartitionError as exc:
            raise SceneError(str(exc), field="regions") from exc
        if len(self.branches) != len(self.constraints):
            raise SceneError("one branch per region required", field="regions")
        return self

    def with_circle(self, index: int, circle: GenCircle) -> Scene:
        circles = list(self.circles)
        circles[index] = circle
        return replace(self, circles=tuple(circles))

    def deformation_spec(self) -> DeformationSpec:
        if self.deformation is None:
            raise SceneError("scene has no deformation family", field="deformation")
        d = self.deformation
        base = self.circles[d.circle_index]
        if base.is_line:
            raise SceneError("deformation of line boundaries is not supported",
                             field="deformation")
        center, radius = base.center, base.radius

        def build(eps: float) -> PiecewiseMap:
            if d.param == "radius":
                c = GenCircle.circle(center, radius - eps)
            elif d.param == "center_x":
                c = GenCircle.circle(center + eps, radius)
            elif d.param == "center_y":
                c = GenCircle.circle(center + 1j * eps, radius)
            else:
                raise SceneError(f"unknown deformation parameter {d.param!r}",
                                 field="deformation")
            return self.with_circle(d.circle_index, c).pieces()

        return DeformationSpec(build, d.schedule, label=self.name)


# ---------------------------------------------------------------------------
# JSON round trip
# ---------------------------------------------------------------------------

def _c2j(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _j2c(v, field_name: str) -> complex:
    if (not isinstance(v, (list, tuple)) or len(v) != 2
            or not all(isinstance(x, (int, float)) for x in v)):
        raise SceneError("expected a [re, im] pair", field=field_name)
    if not all(math.isfinite(float(x)) for x in v):
        raise SceneError("non-finite value", field=field_name)
    return complex(float(v[0]), float(v[1]))


def scene_to_dict(scene: Scene) -> dict:
    out = {
        "name": scene.name,
        "description": scene.description,
        "circles": [{"a": c.a, "b": _c2j(c.b), "d": c.d} for c in scene.circles],
        "regions": [
            {
                "constraints": [[idx, side] for idx, side in cons],
                "map": {
                    "a": _c2j(m.a), "b": _c2j(m.b),
                    "c": _c2j(m.c), "d": _c2j(m.d),
                },
            }
            for cons, m in zip(scene.constraints, scene.branches)
        ],
        "viewport": [scene.viewport.x0, scene.viewport.x1,
                     scene.viewport.y0, scene.viewport.y1],
        "resolution": list(scene.resolution),
        "prefix_len": scene.prefix_len,
        "depth": scene.depth,
        "render": {
            "pd_overlay": scene.render.pd_overlay,
            "periodic_markers": scene.render.periodic_markers,
            "component_coloring": scene.render.component_coloring,
        },
        "anchors": [
            {"point": "inf" if a.point.is_inf else _c2j(a.point.z), "label": a.label}
            for a in scene.anchors
        ],
    }
    if scene.deformation is not None:
        out["deformation"] = {
            "circle": scene.deformation.circle_index,
            "param": scene.deformation.param,
            "schedule": list(scene.deformation.schedule),
        }
    if scene.output is not None:
        out["output"] = scene.output
    return out


def scene_from_dict(data: dict, validate: bool = True) -> Scene:
    if not isinstance(data, dict):
        raise SceneError("scene must be a JSON object")
    for key in ("name", "circles", "regions", "viewport"):
        if key not in data:
            raise SceneError("missing required field", field=key)

    circles = []
    for i, c in enumerate(data["circles"]):
        fname = f"circles[{i}]"
        if not isinstance(c, dict) or not {"a", "b", "d"} <= set(c):
            raise SceneError("expected {a, b, d}", field=fname)
        try:
            circles.append(GenCircle(float(c["a"]), _j2c(c["b"], fname + ".b"),
                                     float(c["d"])))
        except (TypeError, ValueError) as exc:
            raise SceneError(f"invalid circle: {exc}", field=fname) from exc

    constraints = []
    branches = []
    for i, r in enumerate(data["regions"]):
        fname = f"regions[{i}]"
        if not isinstance(r, dict) or "constraints" not in r or "map" not in r:
            raise SceneError("expected {constraints, map}", field=fname)
        cons = []
        for j, pair in enumerate(r["constraints"]):
            if (not isinstance(pair, (list, tuple)) or len(pair) != 2
                    or pair[1] not in (-1, 1)):
                raise SceneError("expected [circle_index, side(+1|-1)]",
                                 field=f"{fname}.constraints[{j}]")
            idx = int(pair[0])
            if not 0 <= idx < len(circles):
                raise SceneError(f"circle index {idx} out of range",
                                 field=f"{fname}.constraints[{j}]")
            cons.append((idx, int(pair[1])))
        m = r["map"]
        try:
            branch = MoebiusMap(
                _j2c(m["a"], fname + ".map.a"), _j2c(m["b"], fname + ".map.b"),
                _j2c(m["c"], fname + ".map.c"), _j2c(m["d"], fname + ".map.d"))
        except ValueError as exc:
            raise SceneError(f"degenerate branch: {exc}", field=fname + ".map") from exc
        if not branch.well_conditioned():
            raise SceneError("degenerate branch: ad - bc is (numerically) zero",
                             field=fname + ".map")
        branches.append(branch)
        constraints.append(tuple(cons))

    vp = data["viewport"]
    if not (isinstance(vp, (list, tuple)) and len(vp) == 4):
        raise SceneError("expected [x0, x1, y0, y1]", field="viewport")
    try:
        viewport = Viewport(*(float(v) for v in vp))
    except ValueError as exc:
        raise SceneError(str(exc), field="viewport") from exc

    res = data.get("resolution", [1024, 1024])
    if not (isinstance(res, (list, tuple)) and len(res) == 2
            and all(int(v) >= 16 for v in res)):
        raise SceneError("resolution must be [W >= 16, H >= 16]", field="resolution")

    render = data.get("render", {})
    options = RenderOptions(
        pd_overlay=bool(render.get("pd_overlay", True)),
        periodic_markers=bool(render.get("periodic_markers", True)),
        component_coloring=bool(render.get("component_coloring", True)),
    )

    anchors = []
    for i, a in enumerate(data.get("anchors", [])):
        p = a.get("point")
        point = INF if p == "inf" else SpherePoint(_j2c(p, f"anchors[{i}].point"))
        anchors.append(Anchor(point, str(a.get("label", f"anchor{i}"))))

    deformation = None
    if "deformation" in data:
        d = data["deformation"]
        deformation = Deformation(int(d["circle"]), str(d["param"]),
                                  tuple(float(x) for x in d["schedule"]))

    scene = Scene(
        name=str(data["name"]),
        description=str(data.get("description", "")),
        circles=tuple(circles),
        constraints=tuple(constraints),
        branches=tuple(branches),
        viewport=viewport,
        resolution=(int(res[0]), int(res[1])),
        prefix_len=int(data.get("prefix_len", 24)),
        depth=int(data.get("depth", 8)),
        render=options,
        anchors=tuple(anchors),
        deformation=deformation,
        output=data.get("output"),
    )
    return scene.validated() if validate else scene


def load_scene(path: str, validate: bool = True) -> Scene:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SceneError(f"parse error at line {exc.lineno}, column {exc.colno}: "
                         f"{exc.msg}") from exc
    return scene_from_dict(data, validate=validate)


def save_scene(scene: Scene, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(scene_to_dict(scene), fh, sort_keys=True, indent=2)
        fh.write("\n")


def canonical_json(scene: Scene) -> str:
    return json.dumps(scene_to_dict(scene), sort_keys=True)


# ---------------------------------------------------------------------------
# Gallery
# ---------------------------------------------------------------------------

def _two_region(circle: GenCircle, inside: MoebiusMap, outside: MoebiusMap):
    return (circle,), (((0, NEGATIVE),), ((0, POSITIVE),)), (inside, outside)


def _disc_scene(name, desc, center, radius, inside, outside, viewport, **kw):
    circles, cons, branches = _two_region(GenCircle.circle(center, radius),
                                          inside, outside)
    return Scene(name=name, description=desc, circles=circles, constraints=cons,
                 branches=branches, viewport=Viewport(*viewport), **kw)


_LAMBDA_THIRD = cmath.exp(2j * math.pi / 3)      # rotation by 2*pi/3
_LAMBDA_SIXTH = cmath.exp(1j * math.pi / 3)      # rotation by pi/3
GOLDEN_FRACTION = (math.sqrt(5.0) - 1.0) / 2.0


def schottky_branches(lam: float) -> tuple[MoebiusMap, MoebiusMap]:
    """The structural-stability family, parameterized by the pairing radius.

    f(z) = 5i/2 + lam^2/(z + 5i/2) swaps the circles of radius lam centered
    at -5i/2 and 5i/2 (exterior to interior); g does the same across the
    circles centered at -2 and 2.  For lam well below 1 the four circles
    have disjoint closed interiors, so the generated group is a classical
    Schottky group, and the boundary circle |z - i| = 1/2 lies in the
    common exterior (a fundamental region).
    """
    if not 0 < lam < 1:
        raise SceneError("pairing radius must lie in (0, 1)", field="lambda")
    f = MoebiusMap(2.5j, lam * lam - 6.25, 1, 2.5j)
    g = MoebiusMap(2.0, lam * lam + 4.0, 1, 2.0)
    return f, g


def schottky_scene(lam: float, name: str = "fig_schottky") -> Scene:
    f, g = schottky_branches(lam)
    return _disc_scene(
        name, "Schottky-group scene: both branches pair circles across a "
        "fundamental region containing the boundary circle",
        1j, 0.5, f, g, (-3.4, 3.4, -3.4, 3.4),
        depth=6, prefix_len=16,
        anchors=(Anchor(SpherePoint(1j), "boundary-disc interior"),),
    )


def _fuchsian_branches() -> tuple[MoebiusMap, MoebiusMap]:
    # two parabolic isometries of the unit disc, fixing -1 and +1
    f = MoebiusMap(1 + 1j, 1j, -1j, 1 - 1j)
    g = MoebiusMap(1 + 1j, -1j, 1j, 1 - 1j)
    return f, g


def _build_gallery() -> dict[str, Scene]:
    scenes: dict[str, Scene] = {}

    def add(scene: Scene):
        scenes[scene.name] = scene

    lam_attr = 0.95 * _LAMBDA_THIRD
    add(_disc_scene(
        "fig_attr", "Attractive basins: contracting rotation inside an "
        "off-center disc, contracting point reflection outside",
        -0.5, 1.0, MoebiusMap.scaling(lam_attr),
        MoebiusMap.affine(-lam_attr, lam_attr), (-2.2, 2.2, -2.2, 2.2),
        anchors=(Anchor(SpherePoint(0j), "fixed basin"),
                 Anchor(SpherePoint(lam_attr / (1 + lam_attr)), "outer basin")))
    )
    add(_disc_scene(
        "fig_rot", "Rotation domains: order-3 rotations inside and outside "
        "an off-center disc",
        -0.5, 1.0, MoebiusMap.scaling(_LAMBDA_THIRD),
        MoebiusMap.affine(-_LAMBDA_THIRD, _LAMBDA_THIRD), (-2.2, 2.2, -2.2, 2.2),
        anchors=(Anchor(SpherePoint(0j), "rotation domain"),))
    )
    add(_disc_scene(
        "fig_rotneutr", "Neutral six-cycle domains of the order-3 rotation scene",
        -0.5, 1.0, MoebiusMap.scaling(_LAMBDA_THIRD),
        MoebiusMap.affine(-_LAMBDA_THIRD, _LAMBDA_THIRD), (-2.2, 2.2, -2.2, 2.2),
        anchors=(Anchor(SpherePoint(0.5 + 0.25j), "six-cycle domain"),))
    )
    add(_disc_scene(
        "fig_rotirr", "Rotation domains with an irrational rotation angle",
        -0.5, 1.0, MoebiusMap.scaling(cmath.exp(1j * math.pi * GOLDEN_FRACTION)),
        MoebiusMap.affine(-cmath.exp(1j * math.pi * GOLDEN_FRACTION),
                          cmath.exp(1j * math.pi * GOLDEN_FRACTION)),
        (-2.2, 2.2, -2.2, 2.2),
        anchors=(Anchor(SpherePoint(0j), "rotation domain"),))
    )
    add(_disc_scene(
        "fig_parab", "Parabolic basin: the disc tangent to the origin is "
        "invariant and its points drift to the tangency fixed point",
        -0.5, 0.5, MoebiusMap(1, 0, -1, 1),
        MoebiusMap.affine(-1.1 * _LAMBDA_THIRD, 1.1 * _LAMBDA_THIRD),
        (-1.7, 1.7, -1.7, 1.7), depth=6,
        anchors=(Anchor(SpherePoint(-0.5 + 0j), "parabolic basin"),))
    )
    add(_disc_scene(
        "fig_rot2fix", "Rotation domain containing both fixed points of its "
        "return map (0 and infinity)",
        1.0, 0.5, MoebiusMap.affine(-1j, 1j), MoebiusMap.scaling(1j),
        (-2.2, 2.8, -2.5, 2.5),
        anchors=(Anchor(SpherePoint(0j), "two-fixed-point domain"),))
    )
    add(_disc_scene(
        "fig_rotann", "Annular rotation domain without fixed points; the "
        "radius expands inside the unit disc and contracts outside",
        0.0, 1.0, MoebiusMap.scaling(4.0 / 3.0 * _LAMBDA_SIXTH),
        MoebiusMap.scaling(0.75 * _LAMBDA_SIXTH), (-1.7, 1.7, -1.7, 1.7),
        anchors=(Anchor(SpherePoint(1.15 + 0j), "annulus"),))
    )
    add(_disc_scene(
        "fig_rotext", "Neutral six-cycle domains from balanced expansion and "
        "contraction with a sixth-root rotation",
        -0.5, 1.0, MoebiusMap.scaling(0.95 * _LAMBDA_SIXTH),
        MoebiusMap.scaling(_LAMBDA_SIXTH / 0.95), (-2.2, 2.2, -2.2, 2.2),
        anchors=(Anchor(SpherePoint(-1.05 - 0.1j), "six-cycle domain"),))
    )
    add(_disc_scene(
        "fig_itin", "Itinerary labels: every regularity component is one "
        "itinerary class",
        0.25, 0.25, MoebiusMap.scaling(_LAMBDA_SIXTH),
        MoebiusMap.affine(-_LAMBDA_SIXTH, _LAMBDA_SIXTH),
        (-1.1, 1.5, -1.3, 1.3),
        anchors=(Anchor(SpherePoint(-0.8 + 0.8j), "constant-symbol region"),))
    )

    wander_circles = (GenCircle.real_axis(),)
    wander_cons = (((0, NEGATIVE),), ((0, POSITIVE),))
    wander_branches = (MoebiusMap.scaling(1j), MoebiusMap.affine(-1j, 1 + 1j))
    add(Scene(
        name="fig_wander",
        description="All regularity components wander: two euclidean "
        "rotations split along the real axis; components are unit squares",
        circles=wander_circles, constraints=wander_cons,
        branches=wander_branches, viewport=Viewport(-1.0, 5.0, -1.0, 5.0),
        depth=6,
        anchors=(Anchor(SpherePoint(0.5 + 0.5j), "wandering square"),),
    ))
    add(Scene(
        name="wander_squares",
        description="The wandering-square scene framed on the first "
        "quadrant lattice cells",
        circles=wander_circles, constraints=wander_cons,
        branches=wander_branches, viewport=Viewport(0.0, 4.0, 0.0, 4.0),
        depth=6,
        anchors=(Anchor(SpherePoint(0.5 + 1.5j), "wandering square"),),
    ))

    add(_disc_scene(
        "fig_conn_left", "Finite connectivity 4: doubling inside a small "
        "disc, order-4 rotation outside",
        1.5, 0.5, MoebiusMap.scaling(2.0),
        MoebiusMap.scaling(cmath.exp(0.5j * math.pi)), (-2.4, 2.4, -2.4, 2.4),
        depth=8, anchors=(Anchor(SpherePoint(0j), "outer rotation region"),))
    )
    add(_disc_scene(
        "fig_conn_right", "Finite connectivity 5: doubling inside a small "
        "disc, order-5 rotation outside",
        1.5, 0.5, MoebiusMap.scaling(2.0),
        MoebiusMap.scaling(cmath.exp(0.4j * math.pi)), (-2.4, 2.4, -2.4, 2.4),
        depth=10, anchors=(Anchor(SpherePoint(0j), "outer rotation region"),))
    )
    add(_disc_scene(
        "fig_conninfty_left", "Infinite connectivity: identity on a disc, "
        "doubling outside; preimage discs accumulate at the origin "
        "(radius kept below 1/3 so consecutive preimage discs stay disjoint)",
        1.0, 0.3, MoebiusMap.identity(), MoebiusMap.scaling(2.0),
        (-0.35, 1.55, -0.95, 0.95), depth=10,
        anchors=(Anchor(SpherePoint(-0.2 + 0.6j), "outer region"),))
    )
    add(_disc_scene(
        "fig_conninfty_right", "Infinite connectivity with an expanding "
        "irrationally-rotating outer branch",
        1.5, 0.5, MoebiusMap.scaling(2.0),
        MoebiusMap.scaling(1.2 * cmath.exp(0.4j * math.pi)),
        (-2.4, 2.4, -2.4, 2.4), depth=8,
        anchors=(Anchor(SpherePoint(0j), "outer region"),))
    )

    f, g = _fuchsian_branches()
    add(_disc_scene(
        "fig_spidstable", "Stable deformations: boundary circle far from the "
        "limit set (the unit circle) of the generated group",
        0.0, 2.0, f, g, (-2.6, 2.6, -2.6, 2.6), depth=8, prefix_len=16,
        deformation=Deformation(0, "radius", (0.2, 0.1, 0.05, 0.025)),
        anchors=(Anchor(SpherePoint(0j), "inner region"),)))
    add(_disc_scene(
        "fig_spidunstable", "Unstable deformations: boundary circle crossing "
        "the limit set",
        -1.5, 1.0, f, g, (-3.1, 1.5, -2.3, 2.3), depth=8, prefix_len=16,
        deformation=Deformation(0, "radius", (0.2, 0.1, 0.05, 0.025)),
        anchors=(Anchor(SpherePoint(-1.5 + 0j), "disc interior"),)))

    add(schottky_scene(0.6))

    add(_disc_scene(
        "whole_sphere", "The pre-discontinuity set fills the sphere: "
        "doubling inside the unit disc, times two-thirds outside",
        0.0, 1.0, MoebiusMap.scaling(2.0), MoebiusMap.scaling(2.0 / 3.0),
        (-2.5, 2.5, -2.5, 2.5), depth=12,
        anchors=(Anchor(SpherePoint(0.75 + 0j), "radial orbit"),))
    )
    return scenes


_GALLERY: dict[str, Scene] | None = None


def gallery_names() -> list[str]:
    return list(gallery_all().keys())


def gallery_all() -> dict[str, Scene]:
    global _GALLERY
    if _GALLERY is None:
        _GALLERY = _build_gallery()
    return _GALLERY


def gallery(name: str) -> Scene:
    scenes = gallery_all()
    if name not in scenes:
        listing = ", ".join(sorted(scenes))
        raise SceneError(f"unknown gallery scene {name!r}; available: {listing}")
    return scenes[name]
