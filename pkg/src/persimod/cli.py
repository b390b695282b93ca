"""
Command-line front end: pipeline commands emitting barcode JSON (and
optional SVG), distance and invariant queries, and scenario reproduction.

Exit codes: 0 success, 1 input error, 2 assertion/acceptance failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

from . import field as ff
from .barcode import Bar, Barcode, beta_k, boundary_depth, bottleneck_distance, \
    ell, infinite_endpoint_spectrum, multiplicity_function, mu_odd, nu
from .complexes import (FiniteMetricSpace, Triangulation, cech_barcode,
                        circle_complex, parse_distance_matrix, parse_grid,
                        parse_point_cloud, rips_barcode, sublevel_filtration,
                        torus_grid_complex)
from .filtered_complex import barcode_of_complex
from .reproduce import SCENARIOS, run_scenario
from .serialize import barcode_to_dict, load_barcode
from .svg import barcode_to_svg


@dataclass
class RunConfig:
    characteristic: int = 2
    max_dim: int = 2
    seed: int = 0
    slack: float = 0.05
    out: str | None = None
    svg: str | None = None

    def __post_init__(self):
        ff.check_characteristic(self.characteristic)
        if self.slack < 0:
            raise ValueError("slack must be >= 0")


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e}") from None


def _emit(bc: Barcode, cfg: RunConfig) -> None:
    payload = json.dumps(barcode_to_dict(bc), indent=1)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(payload + "\n")
    else:
        print(payload)
    if cfg.svg:
        with open(cfg.svg, "w") as fh:
            fh.write(barcode_to_svg(bc))


def _config(args) -> RunConfig:
    return RunConfig(characteristic=getattr(args, "field", 2),
                     max_dim=getattr(args, "max_dim", 2),
                     seed=getattr(args, "seed", 0),
                     slack=getattr(args, "slack", 5.0) / 100.0,
                     out=getattr(args, "out", None),
                     svg=getattr(args, "svg", None))


def _cmd_rips(args) -> int:
    cfg = _config(args)
    text = _read(args.input)
    if args.distance_matrix:
        space = parse_distance_matrix(text)
    else:
        space = FiniteMetricSpace.from_points(parse_point_cloud(text).points)
    _emit(rips_barcode(space, cfg.max_dim, cfg.characteristic), cfg)
    return 0


def _cmd_cech(args) -> int:
    cfg = _config(args)
    cloud = parse_point_cloud(_read(args.input))
    _emit(cech_barcode(cloud, cfg.max_dim, cfg.characteristic), cfg)
    return 0


def _cmd_sublevel(args) -> int:
    cfg = _config(args)
    simplices = []
    for ln, raw in enumerate(_read(args.input).splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        simplices.append(tuple(line.split()))
    values_rows = parse_point_cloud(_read(args.values))
    flat = values_rows.points.reshape(-1)
    vertices = sorted({v for s in simplices for v in s})
    if len(flat) != len(vertices):
        raise InputError(f"{len(vertices)} vertices but {len(flat)} values")
    vert_values = dict(zip(vertices, flat.tolist()))
    tri = Triangulation(simplices)
    _emit(barcode_of_complex(sublevel_filtration(tri, vert_values,
                                                 cfg.characteristic)), cfg)
    return 0


def _cmd_circle(args) -> int:
    cfg = _config(args)
    samples = parse_point_cloud(_read(args.input)).points.reshape(-1)
    _emit(barcode_of_complex(circle_complex(samples.tolist(),
                                            cfg.characteristic)), cfg)
    return 0


def _cmd_torus(args) -> int:
    cfg = _config(args)
    grid = parse_grid(_read(args.input), periodic=True, period=args.period)
    _emit(barcode_of_complex(torus_grid_complex(grid, cfg.characteristic)), cfg)
    return 0


def _cmd_distance(args) -> int:
    b1 = load_barcode(args.barcode1)
    b2 = load_barcode(args.barcode2)
    d = bottleneck_distance(b1, b2)
    print("inf" if d == math.inf else f"{d:.12g}")
    return 0


def _cmd_invariants(args) -> int:
    bc = load_barcode(args.barcode)
    report: dict = {"bars": len(bc.bars)}
    report["boundary_depth"] = boundary_depth(bc)
    if args.beta_k:
        report["beta_k"] = {k: beta_k(bc, k) for k in args.beta_k}
    if args.mu_k:
        report["mu_k"] = {k: multiplicity_function(bc, k) for k in args.mu_k}
    if args.mu_odd:
        report["mu_odd"] = mu_odd(bc)
    if args.ell:
        lo, hi = args.ell
        report["ell"] = ell(bc, lo, hi)
    if args.nu is not None:
        report["nu"] = nu(bc, args.nu)
    if args.spectrum:
        report["infinite_endpoint_spectrum"] = infinite_endpoint_spectrum(bc)

    def sanitize(x):
        if isinstance(x, dict):
            return {str(k): sanitize(v) for k, v in x.items()}
        if isinstance(x, list):
            return [sanitize(v) for v in x]
        if x == math.inf:
            return "inf"
        if x == -math.inf:
            return "-inf"
        return x

    print(json.dumps(sanitize(report), indent=1))
    return 0


def _cmd_ellipsoid(args) -> int:
    from .symplectic import DegeneratePathError, EllipsoidSpec, \
        ellipsoid_sh_degree, sbm_lower_bound
    lo, hi, step = args.window
    if step <= 0 or hi <= lo:
        raise InputError("window grid must be lo hi step with step > 0")
    print(f"# degrees for E(1, {args.aspect:g}, ..) in complex dimension {args.n}")
    print("# a degree")
    a = lo
    while a <= hi + 1e-12:
        try:
            print(f"{a:.6g} {ellipsoid_sh_degree(a, args.n, args.aspect)}")
        except DegeneratePathError:
            print(f"{a:.6g} spectral")
        a += step
    if args.compare is not None:
        r2, n2 = args.compare
        d = sbm_lower_bound(EllipsoidSpec(1.0, args.aspect, args.n),
                            EllipsoidSpec(r2, n2, args.n))
        print(f"# rescaling lower bound vs E({r2:g}, {r2 * n2:g}, ..): {d:.12g}")
    return 0


def _cmd_reproduce(args) -> int:
    cfg = _config(args)
    names = list(SCENARIOS) if args.name == "all" else [args.name]
    failed = 0
    for name in names:
        try:
            result = run_scenario(name, seed=cfg.seed, slack=cfg.slack)
        except KeyError as e:
            raise InputError(str(e)) from None
        print(result.report())
        failed += 0 if result.passed else 1
    return 0 if failed == 0 else 2


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="persimod",
        description="Barcodes of filtered complexes and persistence-module machinery.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, dims=True):
        p.add_argument("--field", type=int, default=2, metavar="P",
                       help="prime field characteristic (default 2)")
        if dims:
            p.add_argument("--max-dim", type=int, default=2, metavar="K",
                           help="maximum simplex dimension (default 2)")
        p.add_argument("--out", metavar="PATH", help="write barcode JSON here")
        p.add_argument("--svg", metavar="PATH", help="also render an SVG")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--slack", type=float, default=5.0, metavar="PCT",
                       help="tolerance percentage for inequality scenarios")

    p = sub.add_parser("rips", help="Rips barcode of a point cloud or distance matrix")
    p.add_argument("input")
    p.add_argument("--distance-matrix", action="store_true",
                   help="treat the input as an n x n distance matrix")
    common(p)
    p.set_defaults(fn=_cmd_rips)

    p = sub.add_parser("cech", help="Cech barcode of a low-dimensional point cloud")
    p.add_argument("input")
    common(p)
    p.set_defaults(fn=_cmd_cech)

    p = sub.add_parser("sublevel", help="sublevel barcode of a triangulation")
    p.add_argument("input", help="file with one maximal simplex per line (vertex names)")
    p.add_argument("--values", required=True,
                   help="CSV of vertex values, sorted by vertex name")
    common(p)
    p.set_defaults(fn=_cmd_sublevel)

    p = sub.add_parser("circle", help="barcode of cyclic samples")
    p.add_argument("input", help="CSV of sample values")
    common(p)
    p.set_defaults(fn=_cmd_circle)

    p = sub.add_parser("torus", help="sublevel barcode of a periodic grid")
    p.add_argument("input", help="grid CSV: ny lines of nx values")
    p.add_argument("--period", type=float, default=2 * math.pi)
    common(p)
    p.set_defaults(fn=_cmd_torus)

    p = sub.add_parser("distance", help="bottleneck distance of two barcode files")
    p.add_argument("barcode1")
    p.add_argument("barcode2")
    p.set_defaults(fn=_cmd_distance)

    p = sub.add_parser("invariants", help="scalar invariants of a barcode file")
    p.add_argument("barcode")
    p.add_argument("--beta-k", type=int, nargs="*", default=[], metavar="K")
    p.add_argument("--mu-k", type=int, nargs="*", default=[], metavar="K")
    p.add_argument("--mu-odd", action="store_true")
    p.add_argument("--ell", type=float, nargs=2, metavar=("LO", "HI"))
    p.add_argument("--nu", type=float, metavar="C")
    p.add_argument("--spectrum", action="store_true")
    p.set_defaults(fn=_cmd_invariants)

    p = sub.add_parser("ellipsoid", help="filtered-homology degree table of a round ellipsoid")
    p.add_argument("--n", type=int, default=1, help="complex dimension")
    p.add_argument("--aspect", type=float, default=1.0, help="aspect ratio N")
    p.add_argument("--window", type=float, nargs=3, default=[0.5, 4.5, 1.0],
                   metavar=("LO", "HI", "STEP"), help="grid of window values a")
    p.add_argument("--compare", type=float, nargs=2, metavar=("R", "N"),
                   help="also print the rescaling lower bound vs E(r, rN, ..)")
    p.set_defaults(fn=_cmd_ellipsoid)

    p = sub.add_parser("reproduce", help="run a named worked-example scenario")
    p.add_argument("name", help="scenario name or 'all'; see --list")
    common(p, dims=False)
    p.set_defaults(fn=_cmd_reproduce)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except (InputError, ValueError, OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
