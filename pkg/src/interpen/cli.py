"""Command-line entry points.

Exit codes: 0 success (and all certificates passing), 2 a certificate or
verification failed, 1 any computational error, 64 usage errors.  Systems
and bundles travel as JSON on stdin/stdout or through --system/--bundle/--out
paths, so subcommands compose under pipes:

    interpen lame --mu 1 --lambda 1 | interpen classify
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import harmonic, lewy, rkc, render
from .errors import InterpenError
from .systems import EllipticSystem, classify, is_elliptic, is_strongly_convex, lame
from .synthesis import synthesize_cubic, synthesize_quadratic

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CERT_FAIL = 2
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _load_system(path) -> EllipticSystem:
    if path:
        with open(path) as fh:
            return EllipticSystem.from_dict(json.load(fh))
    return EllipticSystem.from_dict(json.load(sys.stdin))


def _emit(obj, out=None):
    text = json.dumps(obj, indent=2)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _cmd_lame(args):
    system = lame(args.mu, args.lam)
    _emit(system.to_dict(), args.out)
    return EXIT_OK


def _cmd_classify(args):
    system = _load_system(args.system)
    result = classify(system)
    verdict = is_elliptic(system)
    out = result.to_dict()
    out["elliptic_margin"] = verdict.margin
    out["strongly_convex"] = is_strongly_convex(system)
    _emit(out, args.out)
    return EXIT_OK


def _cmd_synthesize(args):
    system = _load_system(args.system)
    if args.degree == 2:
        sol = synthesize_quadratic(system)
    else:
        sol = synthesize_cubic(system)
    _emit(sol.to_dict(), args.out)
    return EXIT_OK


def _cmd_rkc(args):
    system = _load_system(args.system)
    bundle = rkc.build_rkc_counterexample(
        system,
        k=args.k,
        n_samples=args.samples,
        sign_grid_n=args.sign_grid,
        fold_grid_n=args.fold_grid,
    )
    _emit(bundle.to_dict(), args.out)
    if args.csv:
        bundle.boundary.to_csv(args.csv)
    return EXIT_OK if bundle.certificates.all_pass() else EXIT_CERT_FAIL


def _cmd_lewy(args):
    system = _load_system(args.system)
    bundle = lewy.build_lewy_counterexample(
        system, n_samples=args.samples, n_probe=args.probes
    )
    _emit(bundle.to_dict(), args.out)
    if args.csv:
        bundle.boundary.to_csv(args.csv)
    return EXIT_OK if bundle.certificates.all_pass() else EXIT_CERT_FAIL


def _load_bundle(path):
    with open(path) as fh:
        data = json.load(fh)
    kind = data.get("kind")
    if kind == "rkc":
        return "rkc", rkc.bundle_from_dict(data)
    if kind == "lewy":
        return "lewy", lewy.bundle_from_dict(data)
    raise InterpenError(f"unknown bundle kind: {kind!r}")


def _cmd_verify(args):
    kind, bundle = _load_bundle(args.bundle)
    if kind == "rkc":
        report = rkc.verify_bundle(bundle)
    else:
        report = lewy.verify_bundle(bundle)
    _emit(report, args.out)
    return EXIT_OK if report["ok"] else EXIT_CERT_FAIL


def _cmd_render(args):
    kind, bundle = _load_bundle(args.bundle)
    if kind != "rkc":
        raise InterpenError("figures are defined for rkc bundles")
    if args.figure == 1:
        render.render_figure1(bundle, args.out)
    else:
        radii = (
            [float(v) for v in args.radii.split(",")]
            if args.radii
            else render.default_figure2_radii(bundle)
        )
        render.render_figure2(bundle, radii, args.out)
    return EXIT_OK


def _cmd_harmonic_demo(args):
    if args.polygon:
        with open(args.polygon) as fh:
            vertices = json.load(fh)
    else:
        vertices = [[1.5, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]]
    boundary = harmonic.BoundaryMap.from_polygon(np.array(vertices))
    result = harmonic.rkc_demo(boundary, grid_n=args.grid_n, n_quad=args.quad)
    _emit(
        {
            "injective": result["injective"],
            "inside_hull": result["inside_hull"],
            "image_diameter": result["image_diameter"],
        },
        args.out,
    )
    return EXIT_OK if result["injective"] and result["inside_hull"] else EXIT_CERT_FAIL


def _build_parser() -> _Parser:
    parser = _Parser(prog="interpen", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="write JSON here instead of stdout")

    p = sub.add_parser("lame", help="emit the elasticity system for (mu, lambda)")
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    common(p)
    p.set_defaults(func=_cmd_lame)

    p = sub.add_parser("classify", help="ellipticity and decoupling classification")
    p.add_argument("--system", help="system JSON path (default: stdin)")
    common(p)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("synthesize", help="solve for the polynomial solution")
    p.add_argument("--degree", type=int, choices=(2, 3), required=True)
    p.add_argument("--system")
    common(p)
    p.set_defaults(func=_cmd_synthesize)

    p = sub.add_parser("rkc", help="build and certify the non-injectivity bundle")
    p.add_argument("--system")
    p.add_argument("--k", type=float, default=None)
    p.add_argument("--samples", type=int, default=rkc.DEFAULT_SAMPLES)
    p.add_argument("--sign-grid", type=int, default=rkc.DEFAULT_SIGN_GRID)
    p.add_argument("--fold-grid", type=int, default=rkc.DEFAULT_FOLD_GRID)
    p.add_argument("--csv", help="also dump boundary samples as CSV")
    common(p)
    p.set_defaults(func=_cmd_rkc)

    p = sub.add_parser("lewy", help="build and certify the degenerate-Jacobian bundle")
    p.add_argument("--system")
    p.add_argument("--samples", type=int, default=lewy.DEFAULT_SAMPLES)
    p.add_argument("--probes", type=int, default=lewy.DEFAULT_PROBES)
    p.add_argument("--csv")
    common(p)
    p.set_defaults(func=_cmd_lewy)

    p = sub.add_parser("verify", help="recheck a stored bundle")
    p.add_argument("--bundle", required=True)
    common(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("render", help="emit an SVG figure from a bundle")
    p.add_argument("--bundle", required=True)
    p.add_argument("--figure", type=int, choices=(1, 2), required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--radii", help="comma-separated circle radii for figure 2")
    p.set_defaults(func=_cmd_render)

    p = sub.add_parser("harmonic-demo", help="positive case: harmonic extension")
    p.add_argument("--grid-n", type=int, default=200)
    p.add_argument("--quad", type=int, default=2048)
    p.add_argument("--polygon", help="JSON vertex list of the convex target")
    common(p)
    p.set_defaults(func=_cmd_harmonic_demo)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_USAGE
    try:
        return args.func(args)
    except InterpenError as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_ERROR
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
