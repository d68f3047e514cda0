"""Command-line front end: ``posreach <subcommand> ...``.

Exit codes: 0 success, 1 computation error or failed verification, 2 usage.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from .bounds import (
    ReachParams,
    check_manifold_condition,
    check_set_condition,
    feasibility_region,
    manifold_alpha_interval,
    radius_interval,
)
from .complex import DEFAULT_MAX_SIMPLICES, build_filtration
from .exceptions import PosreachError
from .geometry.cloud import DEFAULT_MAX_POINTS, PointCloud
from .geometry.counterexamples import annuli_radius_sequence, build_counterexample_cloud, tori_radius_sequence
from .geometry.shapes import Circle, Torus
from .homology import Barcode, persistence
from .verify import verify_annuli_counterexample, verify_reconstruction, verify_tori_counterexample


def _positive(text: str) -> float:
    value = float(text)
    if not (math.isfinite(value) and value > 0):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return value


def _nonneg(text: str) -> float:
    value = float(text)
    if not (math.isfinite(value) and value >= 0):
        raise argparse.ArgumentTypeError(f"expected a non-negative number, got {text!r}")
    return value


def _count(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def _index_list(text: str) -> list[int]:
    try:
        values = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values or min(values) < 0:
        raise argparse.ArgumentTypeError(f"expected non-negative indices, got {text!r}")
    return values


def _radius_list(text: str) -> list[float]:
    try:
        return [_positive(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated radii, got {text!r}") from None


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        Path(out).write_text(text if text.endswith("\n") else text + "\n")


def _caps(parser: argparse.ArgumentParser):
    parser.add_argument("--max-points", type=_count, default=DEFAULT_MAX_POINTS)
    parser.add_argument("--max-simplices", type=_count, default=DEFAULT_MAX_SIMPLICES)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="posreach", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", help="feasibility and admissible radii")
    p.add_argument("--reach", type=_positive, required=True)
    p.add_argument("--eps", type=_nonneg, required=True)
    p.add_argument("--delta", type=_nonneg, required=True)
    p.add_argument("--manifold", action="store_true")
    p.add_argument("--extended", action="store_true")

    p = sub.add_parser("region", help="feasibility grid as CSV")
    p.add_argument("--reach", type=_positive, required=True)
    p.add_argument("--res", type=_count, required=True)
    p.add_argument("--out")

    p = sub.add_parser("construct", help="sample a counterexample")
    p.add_argument("kind", choices=("annuli", "tori"))
    p.add_argument("--eps", type=_nonneg, required=True)
    p.add_argument("--delta", type=_nonneg, required=True)
    p.add_argument("--density", type=_positive, required=True)
    p.add_argument("--components", type=_index_list)
    p.add_argument("--out", required=True)
    p.add_argument("--meta", required=True)
    _caps(p)

    p = sub.add_parser("persist", help="barcode of a point cloud")
    p.add_argument("--in", dest="source", required=True)
    p.add_argument("--complex", choices=("cech", "rips"), default="cech")
    p.add_argument("--max-dim", type=int, choices=(0, 1, 2, 3), default=2)
    p.add_argument("--max-value", type=_positive, required=True)
    p.add_argument("--delaunay", action="store_true", help="restrict to Delaunay faces")
    p.add_argument("--out")
    _caps(p)

    p = sub.add_parser("betti", help="Betti numbers of a barcode at a radius")
    p.add_argument("--barcode", required=True)
    p.add_argument("--radius", type=_nonneg, required=True)
    p.add_argument("--top-dim", type=int, choices=(0, 1, 2), default=2)

    p = sub.add_parser("verify", help="run a verification scenario")
    p.add_argument("scenario", choices=("circle", "torus", "annuli", "tori"))
    p.add_argument("--eps", type=_nonneg, required=True)
    p.add_argument("--delta", type=_nonneg, required=True)
    p.add_argument("--density", type=_positive, required=True)
    p.add_argument("--radius", type=_positive, help="probe radius (circle, torus)")
    p.add_argument("--mode", choices=("set", "manifold"), help="bound to use (circle, torus)")
    p.add_argument("--components", type=_index_list, help="component indices (annuli, tori)")
    p.add_argument("--probes", type=_radius_list, help="probe radii (tori)")
    p.add_argument("--full-table", action="store_true", help="probe every annulus (annuli)")
    p.add_argument("--gap-factor", type=_positive, default=8.0)
    p.add_argument("--no-density-check", action="store_true")
    p.add_argument("--full-cech", action="store_true", help="do not restrict to Delaunay faces")
    p.add_argument("--out")
    _caps(p)
    return parser


def _bounds(args) -> int:
    p = ReachParams(args.reach, args.eps, args.delta)
    mode = "manifold" if args.manifold else "set"
    if args.manifold and args.extended:
        raise ValueError("--extended applies to the set bound only")
    feasible = check_manifold_condition(p) if args.manifold else check_set_condition(p)
    doc = {"mode": mode, "feasible": feasible, "interval_lo": None, "interval_hi": None,
           "alpha_lo": None, "alpha_hi": None}
    if feasible:
        interval = radius_interval(p, mode, args.extended)
        doc["interval_lo"], doc["interval_hi"] = interval.lo, interval.hi
        if args.manifold:
            alpha = manifold_alpha_interval(p)
            doc["alpha_lo"], doc["alpha_hi"] = alpha.lo, alpha.hi
        else:
            doc["alpha_lo"], doc["alpha_hi"] = interval.lo - p.eps, interval.hi - p.eps
    _emit(json.dumps(doc), None)
    return 0


def _region(args) -> int:
    region = feasibility_region(args.reach, args.res)
    _emit(region.to_csv(), args.out)
    return 0


def _construct(args) -> int:
    seq = annuli_radius_sequence if args.kind == "annuli" else tori_radius_sequence
    meta = seq(args.eps, args.delta)
    cloud = build_counterexample_cloud(meta, args.density, args.components, max_points=args.max_points)
    cloud.to_csv(args.out)
    meta.to_json(args.meta)
    return 0


def _persist(args) -> int:
    cloud = PointCloud.from_csv(args.source)
    f = build_filtration(cloud, args.complex, args.max_dim, args.max_value,
                         "delaunay" if args.delaunay else None, args.max_simplices)
    _emit(persistence(f).to_json(), args.out)
    return 0


def _betti(args) -> int:
    profile = Barcode.from_json(args.barcode).profile(args.radius, args.top_dim)
    _emit(json.dumps(profile.to_dict()), None)
    return 0


def _verify(args) -> int:
    restrict = None if args.full_cech else "delaunay"
    caps = {"max_points": args.max_points, "max_simplices": args.max_simplices}
    if args.scenario in ("circle", "torus"):
        shape = Circle(1.0) if args.scenario == "circle" else Torus()
        report = verify_reconstruction(shape, ReachParams(shape.reach, args.eps, args.delta), args.density,
                                       r=args.radius, mode=args.mode, restrict=restrict, **caps)
    elif args.scenario == "annuli":
        report = verify_annuli_counterexample(
            args.eps, args.delta, args.density, components=args.components, full_table=args.full_table,
            gap_factor=args.gap_factor, check_density=not args.no_density_check, restrict=restrict, **caps)
    else:
        report = verify_tori_counterexample(
            args.eps, args.delta, args.density, probes=args.probes, components=args.components or (0,),
            gap_factor=args.gap_factor, check_density=not args.no_density_check, restrict=restrict, **caps)
    _emit(report.to_json(), args.out)
    return 0 if report.passed else 1


HANDLERS = {
    "bounds": _bounds,
    "region": _region,
    "construct": _construct,
    "persist": _persist,
    "betti": _betti,
    "verify": _verify,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return HANDLERS[args.command](args)
    except (PosreachError, ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"posreach {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
