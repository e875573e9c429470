"""Command line interface.

    pcm render  <scene.json | --gallery NAME> [--out PATH] [--res WxH]
                [--depth N] [--prefix K]
    pcm gallery --list | pcm gallery NAME
    pcm probe   alpha|omega|continuity|schottky|stability <scene> [flags]
    pcm verify  <scene.json | --gallery NAME>

Exit codes: 0 success, 2 validation error, 3 truncation (budget exceeded).
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .errors import PartitionError, SceneError, TruncationError
from .kleinian import alpha_limit_probe, omega_limit_probe, schottky_check
from .piecewise import sphere_samples
from .prediscont import PointSample, directed_distance, pd_up_to
from .render import render_scene
from .scenes import (Scene, canonical_json, gallery, gallery_names,
                     load_scene, scene_to_dict, schottky_scene)
from .stability import continuity_probe, structural_stability_probe


def _add_scene_arg(p: argparse.ArgumentParser):
    p.add_argument("scene", nargs="?", help="scene JSON file")
    p.add_argument("--gallery", dest="gallery_name", help="built-in scene name")


def _resolve_scene(args) -> Scene:
    if args.gallery_name:
        return gallery(args.gallery_name)
    if not args.scene:
        raise SceneError("a scene file or --gallery NAME is required")
    return load_scene(args.scene)


def _parse_res(text: str) -> tuple[int, int]:
    try:
        w, h = text.lower().split("x")
        return int(w), int(h)
    except ValueError as exc:
        raise SceneError(f"bad resolution {text!r}; expected WxH") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pcm",
                                     description="piecewise conformal dynamics")
    sub = parser.add_subparsers(dest="command", required=True)

    p_render = sub.add_parser("render", help="render a scene to a PPM image")
    _add_scene_arg(p_render)
    p_render.add_argument("--out", help="output path (default: <name>.ppm)")
    p_render.add_argument("--res", help="resolution WxH")
    p_render.add_argument("--depth", type=int, help="pre-discontinuity depth")
    p_render.add_argument("--prefix", type=int, help="itinerary prefix length")

    p_gallery = sub.add_parser("gallery", help="list scenes or print one as JSON")
    p_gallery.add_argument("name", nargs="?")
    p_gallery.add_argument("--list", action="store_true")

    p_probe = sub.add_parser("probe", help="numerical probes")
    p_probe.add_argument("kind", choices=["alpha", "omega", "continuity",
                                          "schottky", "stability"])
    _add_scene_arg(p_probe)
    p_probe.add_argument("--depth", type=int, default=None)
    p_probe.add_argument("--wordlen", type=int, default=8)
    p_probe.add_argument("--seeds", type=int, default=100)
    p_probe.add_argument("--iters", type=int, default=2000)
    p_probe.add_argument("--res", default="512x512")
    p_probe.add_argument("--prefix", type=int, default=16)
    p_probe.add_argument("--other", help="second scene file (stability probe)")
    p_probe.add_argument("--schottky-lambda", type=float, default=None,
                         help="stability probe against the built-in family")

    p_verify = sub.add_parser("verify", help="run invariant suites on a scene")
    _add_scene_arg(p_verify)
    p_verify.add_argument("--depth", type=int, default=4)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except TruncationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (SceneError, PartitionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _dispatch(args) -> int:
    if args.command == "gallery":
        if args.list or not args.name:
            for name in gallery_names():
                print(name)
            return 0
        print(json.dumps(scene_to_dict(gallery(args.name)), sort_keys=True, indent=2))
        return 0

    if args.command == "render":
        scene = _resolve_scene(args)
        w, h = _parse_res(args.res) if args.res else scene.resolution
        data, report = render_scene(scene, width=w, height=h,
                                    prefix_len=args.prefix, depth=args.depth)
        out = args.out or f"{scene.name}.ppm"
        with open(out, "wb") as fh:
            fh.write(data)
        print(f"wrote {out} ({report.width}x{report.height}, "
              f"{report.n_components} components)")
        for warning in report.warnings:
            print(f"warning: {warning}")
        return 0

    if args.command == "probe":
        return _probe(args)

    if args.command == "verify":
        return _verify(args)

    raise SceneError(f"unknown command {args.command!r}")


def _probe(args) -> int:
    scene = _resolve_scene(args)
    pw = scene.pieces()
    if args.kind == "alpha":
        depth = args.depth or scene.depth
        report = alpha_limit_probe(pw, depth, args.wordlen)
        for line in report.lines():
            print(line)
        return 0
    if args.kind == "omega":
        rng = np.random.default_rng(7)
        seeds = [complex(x, y) for x, y in rng.uniform(-2, 2, size=(args.seeds, 2))]
        report = omega_limit_probe(pw, seeds, args.iters, args.wordlen)
        print(f"max directed distance of orbit tails to limit set "
              f"{report.max_directed:.6f}")
        return 0
    if args.kind == "continuity":
        depth = args.depth or scene.depth
        report = continuity_probe(scene.deformation_spec(), depth, args.wordlen)
        for line in report.lines():
            print(line)
        return 0
    if args.kind == "schottky":
        if len(pw.branches) != 2:
            raise SceneError("schottky probe needs a two-region scene")
        boundary = pw.partition.circles()[0]
        pairing = schottky_check(pw.branches[0], pw.branches[1], boundary)
        if pairing is None:
            print("pairing: not detected (this does not prove the group "
                  "is not Schottky)")
            return 0
        print("pairing: found")
        print(f"boundary inside fundamental region: "
              f"{pairing.boundary_inside_fundamental}")
        for i, c in enumerate(pairing.circles):
            print(f"circle {i + 1}: a={c.a:.9g} b=({c.b.real:.9g},{c.b.imag:.9g}) "
                  f"d={c.d:.9g}")
        return 0
    if args.kind == "stability":
        if args.other:
            other = load_scene(args.other).pieces()
        elif args.schottky_lambda is not None:
            other = schottky_scene(args.schottky_lambda).pieces()
        else:
            raise SceneError("stability probe needs --other or --schottky-lambda")
        w, h = _parse_res(args.res)
        depth = args.depth or min(scene.depth, 6)
        report = structural_stability_probe(pw, other, scene.viewport, w, h,
                                            args.prefix, depth)
        for line in report.lines():
            print(line)
        return 0
    raise SceneError(f"unknown probe {args.kind!r}")


def _verify(args) -> int:
    scene = _resolve_scene(args)
    pw = scene.pieces()
    failures = 0

    def check(name: str, ok: bool, detail: str = ""):
        nonlocal failures
        status = "PASS" if ok else "FAIL"
        suffix = f" ({detail})" if detail else ""
        print(f"{status} {name}{suffix}")
        if not ok:
            failures += 1

    try:
        pw.partition.validate(10_000)
        check("partition coverage and disjointness", True)
    except PartitionError as exc:
        check("partition coverage and disjointness", False, str(exc))

    samples = sphere_samples(2000)
    agree = all(_locate_oracle(pw, p) for p in samples)
    check("locate agrees with sign oracle", agree)

    ok = True
    clean = 0
    for p in samples:
        if clean >= 500:
            break
        itin = pw.itinerary(p, 9)
        if not itin.clean:
            continue
        clean += 1
        shifted = pw.itinerary(pw.eval(p), 8)
        if shifted.symbols != itin.symbols[1:]:
            ok = False
            break
    check("itinerary semiconjugacy (shift relation)", ok)

    depth = max(1, min(args.depth, 6))
    result = pd_up_to(pw, depth)
    ok_words, ok_boundary = _word_bookkeeping(pw, result)
    check("stratum words map forward level by level", ok_words)
    check("deep strata land on the discontinuity set", ok_boundary)

    img1, _ = render_scene(scene, width=96, height=96, prefix_len=8, depth=2,
                           classify=False)
    img2, _ = render_scene(scene, width=96, height=96, prefix_len=8, depth=2,
                           classify=False)
    check("render determinism", img1 == img2)

    return 0 if failures == 0 else 2


def _locate_oracle(pw, p) -> bool:
    idx, boundary = pw.partition.locate(p)
    if boundary:
        return True
    matches = [i for i, r in enumerate(pw.partition.regions) if r.contains_strict(p)]
    return matches == [idx]


def _word_bookkeeping(pw, result) -> tuple[bool, bool]:
    boundary_circles = pw.partition.circles()
    ok_words = True
    ok_boundary = True
    for n in range(1, len(result.strata)):
        stratum = result.strata[n]
        parent = result.strata[n - 1]
        for word, arc in stratum.all_arcs():
            pts = [arc.point_at_fraction(t) for t in np.linspace(0, 1, 9)]
            fwd = [pw.branches[word[-1]].apply(p) for p in pts]
            target = parent.cells.get(word[:-1], [])
            if target:
                dmin = max(min(a.circle.dist_point(q) for a in target) for q in fwd)
                if dmin > 1e-7:
                    ok_words = False
            deep = pts
            for symbol in reversed(word):
                deep = [pw.branches[symbol].apply(p) for p in deep]
            if any(min(c.dist_point(q) for c in boundary_circles) > 1e-7
                   for q in deep):
                ok_boundary = False
    return ok_words, ok_boundary


if __name__ == "__main__":
    sys.exit(main())
