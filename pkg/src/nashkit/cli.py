"""Command-line front end.

Every subcommand reads/writes stable JSON or CSV; complex numbers are
"re+imi" strings in flags and [re, im] pairs in JSON.  Exit codes: 0
success, 2 validation error, 3 numerical failure (the module error name
goes to stderr).
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import analysis as A
from . import campaign as C
from . import curve as CU
from . import poly as P
from .branch import ContinuationOptions, continue_branch, origin_branch
from .errors import NashkitError


def parse_complex(text: str) -> complex:
    """Parse 're+imi' (e.g. '1', '0.5-2i', 'i', '-1.5i')."""
    s = text.strip().replace(" ", "").lower()
    if not s or "inf" in s or "nan" in s:
        raise ValueError(f"not a finite complex number: {text!r}")
    try:
        return complex(s.replace("i", "j"))
    except ValueError:
        raise ValueError(f"cannot parse complex number {text!r}") from None


def _fmt_complex(z: complex) -> list:
    return [float(z.real), float(z.imag)]


def parse_compact(text: str):
    """'disk:<center>:<radius>[:<n>]', 'points:<z1>;<z2>;...',
    'segment:<a>:<b>[:<n>]'."""
    parts = text.split(":")
    kind = parts[0].lower()
    if kind == "disk":
        if len(parts) not in (3, 4):
            raise ValueError("disk spec is disk:<center>:<radius>[:<samples>]")
        n = int(parts[3]) if len(parts) == 4 else 256
        return A.ClosedDisk(parse_complex(parts[1]), float(parts[2]), n)
    if kind == "points":
        if len(parts) != 2:
            raise ValueError("points spec is points:<z1>;<z2>;...")
        return A.FinitePoints(tuple(parse_complex(p)
                                    for p in parts[1].split(";") if p))
    if kind == "segment":
        if len(parts) not in (3, 4):
            raise ValueError("segment spec is segment:<a>:<b>[:<samples>]")
        n = int(parts[3]) if len(parts) == 4 else 129
        return A.Segment(parse_complex(parts[1]), parse_complex(parts[2]), n)
    raise ValueError(f"unknown compact kind {kind!r}")


def parse_domain(text: str) -> A.OpenDisk:
    parts = text.split(":")
    if parts[0].lower() != "disk" or len(parts) not in (3, 4):
        raise ValueError("domain spec is disk:<center>:<radius>[:<samples>]")
    n = int(parts[3]) if len(parts) == 4 else 256
    return A.OpenDisk(parse_complex(parts[1]), float(parts[2]), n)


def _load_poly(path: str) -> P.BivarPoly:
    with open(path) as fh:
        return P.poly_from_json(json.load(fh))


def _emit(args, payload: str):
    if args.out:
        Path(args.out).write_text(payload)
        if not args.quiet:
            print(f"wrote {args.out}")
    elif not args.quiet:
        print(payload, end="" if payload.endswith("\n") else "\n")


def _emit_json(args, obj):
    _emit(args, json.dumps(obj, indent=2) + "\n")


# ---------------------------------------------------------------------------
# handlers


def _cmd_excluded(args):
    S = _load_poly(args.poly)
    if args.rho <= 0:
        raise ValueError("--rho must be positive")
    es = CU.excluded_points(S, args.rho)
    _emit_json(args, {
        "points": [{"z": _fmt_complex(p.location),
                    "categories": sorted(c.value for c in p.categories),
                    "residual": p.witness_residual} for p in es.points],
        "bound": es.bound,
    })
    return 0


def _cmd_trace(args):
    S = _load_poly(args.poly)
    z0 = parse_complex(args.from_z)
    w0 = parse_complex(args.w0)
    with open(args.path) as fh:
        obj = json.load(fh)
    pts = obj["waypoints"] if isinstance(obj, dict) else obj
    waypoints = [complex(re, im) for re, im in pts]
    opts = ContinuationOptions(branch_res=args.branch_res)
    bp = continue_branch(S, (z0, w0), [z0] + waypoints, opts)
    lines = ["z_re,z_im,w_re,w_im,residual"]
    for z, w in bp.samples:
        resid = float(abs(bp.poly(z, w))) / max(P.term_scale(bp.poly, z, w),
                                                1e-300)
        lines.append(f"{z.real!r},{z.imag!r},{w.real!r},{w.imag!r},{resid!r}")
    _emit(args, "\n".join(lines) + "\n")
    return 0


def _branch_of(args):
    S = _load_poly(args.poly)
    if args.rho <= 0:
        raise ValueError("--rho must be positive")
    return origin_branch(S, args.rho), S


def _cmd_bernstein(args):
    g, _ = _branch_of(args)
    K = parse_compact(args.K)
    Omega = parse_domain(args.omega)
    if args.samples:
        Omega = A.OpenDisk(Omega.center, Omega.radius, args.samples)
    rep = A.bernstein_constant(g, K, Omega)
    _emit_json(args, rep.to_json())
    return 0


def _cmd_taylor(args):
    g, _ = _branch_of(args)
    if not (0 < args.r < args.rho):
        raise ValueError("--r must satisfy 0 < r < rho")
    if args.J < 1:
        raise ValueError("--J must be at least 1")
    rep = A.taylor_coeffs(g, args.r, args.J, samples=args.samples or None)
    lines = ["j,re,im,abs"]
    for j, a in enumerate(rep.coeffs, start=1):
        lines.append(f"{j},{a.real!r},{a.imag!r},{abs(a)!r}")
    _emit(args, "\n".join(lines) + "\n")
    return 0


def _cmd_zeros(args):
    g, _ = _branch_of(args)
    center = parse_complex(args.center)
    if args.R <= 0:
        raise ValueError("--R must be positive")
    n = A.zero_count(g, center, args.R, samples=args.samples or 256)
    _emit_json(args, {"count": n})
    return 0


def _cmd_tijdeman(args):
    g, _ = _branch_of(args)
    if args.s <= 1 or args.t <= 0 or args.R <= 0:
        raise ValueError("need --s > 1, --t > 0, --R > 0")
    N, rhs, ok = A.tijdeman_check(g, args.R, args.s, args.t)
    _emit_json(args, {"N": N, "rhs": rhs, "ok": ok})
    return 0


def _cmd_valency(args):
    g, S = _branch_of(args)
    domain = parse_domain(args.domain)
    if args.probes < 1:
        raise ValueError("--probes must be at least 1")
    worst = A.valency_check(S, g, domain, args.probes,
                            seed=args.seed if args.seed is not None else 0)
    _emit_json(args, {"max_preimages": worst, "degree_bound": S.deg_total})
    return 0


def _cmd_campaign(args):
    with open(args.config) as fh:
        cfg = C.CampaignConfig.from_json(json.load(fh))
    if args.seed is not None:
        cfg = C.CampaignConfig.from_json({**cfg.to_json(), "seed": args.seed})
    if args.samples is not None:
        cfg = C.CampaignConfig.from_json({**cfg.to_json(),
                                          "n_samples": args.samples})
    out_dir = args.out or "campaign_out"
    result = C.run_campaign(cfg, out_dir=out_dir)
    if not args.quiet:
        print(json.dumps(result.to_json(), indent=2))
    return 0


def _cmd_sequence(args):
    S_limit = _load_poly(args.limit)
    direction = _load_poly(args.direction)
    with open(args.config) as fh:
        cfg = C.CampaignConfig.from_json(json.load(fh))
    deltas = [float(x) for x in args.deltas.split(",")]
    exp = C.sequence_experiment(S_limit, direction, deltas, cfg)
    _emit_json(args, exp.to_json())
    return 0


def _cmd_bound1912(args):
    coeffs = [float(x) for x in args.coeffs.split(",")]
    if args.R <= 1:
        raise ValueError("--R must exceed 1")
    B, bound, ok = A.check_bernstein_1912(coeffs, args.R)
    _emit_json(args, {"B": B, "bound": bound, "ok": ok})
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", metavar="PATH", default=None,
                        help="write the primary artifact here instead of "
                             "stdout (campaign: output directory)")
    common.add_argument("--quiet", action="store_true",
                        help="suppress stdout echo")
    common.add_argument("--seed", type=int, default=None, metavar="INT",
                        help="random seed override (default: per command)")
    common.add_argument("--samples", type=int, default=None, metavar="N",
                        help="sample-count override (boundary samples or "
                             "campaign draws; default: per command)")

    p = argparse.ArgumentParser(
        prog="nashkit",
        description="Analytic-algebraic (Nash) function toolkit: curve "
                    "branches, excluded points, growth constants, zero "
                    "counts, sampling campaigns.")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("excluded", parents=[common],
                       help="classify excluded points of a curve in a disk")
    q.add_argument("--poly", required=True, metavar="S.json",
                   help="bivariate polynomial JSON file")
    q.add_argument("--rho", type=float, required=True, metavar="R",
                   help="open-disk radius (same units as z)")
    q.set_defaults(func=_cmd_excluded)

    q = sub.add_parser("trace", parents=[common],
                       help="continue a branch along a polygonal path")
    q.add_argument("--poly", required=True, metavar="S.json",
                   help="bivariate polynomial JSON file")
    q.add_argument("--from", dest="from_z", required=True, metavar="Z",
                   help="start z as 're+imi'")
    q.add_argument("--w0", required=True, metavar="W",
                   help="start w as 're+imi' (on the curve)")
    q.add_argument("--path", required=True, metavar="path.json",
                   help="waypoints JSON: [[re,im],...] or "
                        "{\"waypoints\": [...]}")
    q.add_argument("--branch-res", type=float, default=1e-9, metavar="TOL",
                   help="residual tolerance factor (default 1e-9)")
    q.set_defaults(func=_cmd_trace)

    q = sub.add_parser("bernstein", parents=[common],
                       help="growth constant of the origin branch")
    q.add_argument("--poly", required=True, metavar="S.json",
                   help="bivariate polynomial JSON file")
    q.add_argument("--rho", type=float, required=True, metavar="R",
                   help="class-B disk radius")
    q.add_argument("--K", required=True, metavar="SPEC",
                   help="compact: disk:<c>:<r>[:<n>] | points:z1;z2;... | "
                        "segment:<a>:<b>[:<n>]")
    q.add_argument("--omega", required=True, metavar="SPEC",
                   help="domain: disk:<c>:<r>[:<n>] (closure inside rho)")
    q.set_defaults(func=_cmd_bernstein)

    q = sub.add_parser("taylor", parents=[common],
                       help="Taylor coefficients of the origin branch")
    q.add_argument("--poly", required=True, metavar="S.json",
                   help="bivariate polynomial JSON file")
    q.add_argument("--rho", type=float, required=True, metavar="R",
                   help="class-B disk radius")
    q.add_argument("--r", type=float, required=True, metavar="RAD",
                   help="integration circle radius, 0 < r < rho")
    q.add_argument("--J", type=int, required=True, metavar="N",
                   help="number of coefficients (a_1..a_J)")
    q.set_defaults(func=_cmd_taylor)

    q = sub.add_parser("zeros", parents=[common],
                       help="argument-principle zero count of the origin "
                            "branch")
    q.add_argument("--poly", required=True, metavar="S.json",
                   help="bivariate polynomial JSON file")
    q.add_argument("--rho", type=float, required=True, metavar="R",
                   help="class-B disk radius")
    q.add_argument("--center", default="0", metavar="Z",
                   help="counting-disk center 're+imi' (default 0)")
    q.add_argument("--R", type=float, required=True, metavar="RAD",
                   help="counting-disk radius")
    q.set_defaults(func=_cmd_zeros)

    q = sub.add_parser("tijdeman", parents=[common],
                       help="zero count vs. the growth-ratio bound")
    q.add_argument("--poly", required=True, metavar="S.json",
                   help="bivariate polynomial JSON file")
    q.add_argument("--rho", type=float, required=True, metavar="R",
                   help="class-B disk radius")
    q.add_argument("--R", type=float, required=True, metavar="RAD",
                   help="inner counting radius (needs (st+s+t)R < rho)")
    q.add_argument("--s", type=float, default=2.0, metavar="S",
                   help="scale parameter s > 1 (default 2)")
    q.add_argument("--t", type=float, default=1.0, metavar="T",
                   help="scale parameter t > 0 (default 1)")
    q.set_defaults(func=_cmd_tijdeman)

    q = sub.add_parser("valency", parents=[common],
                       help="max preimage count over random image probes")
    q.add_argument("--poly", required=True, metavar="S.json",
                   help="bivariate polynomial JSON file")
    q.add_argument("--rho", type=float, required=True, metavar="R",
                   help="class-B disk radius")
    q.add_argument("--domain", required=True, metavar="SPEC",
                   help="probing domain: disk:<c>:<r>[:<n>]")
    q.add_argument("--probes", type=int, default=6, metavar="N",
                   help="number of probe values (default 6)")
    q.set_defaults(func=_cmd_valency)

    q = sub.add_parser("campaign", parents=[common],
                       help="run a sampling campaign from a config file")
    q.add_argument("--config", required=True, metavar="cfg.json",
                   help="campaign config JSON (a run.json header also works)")
    q.set_defaults(func=_cmd_campaign)

    q = sub.add_parser("sequence", parents=[common],
                       help="growth-ratio convergence along a perturbation")
    q.add_argument("--limit", required=True, metavar="S.json",
                   help="limit polynomial JSON file")
    q.add_argument("--direction", required=True, metavar="D.json",
                   help="perturbation direction polynomial JSON file")
    q.add_argument("--config", required=True, metavar="cfg.json",
                   help="campaign config JSON (K, Omega, rho, tolerances)")
    q.add_argument("--deltas", default="1e-1,1e-2,1e-3,1e-4,1e-5,1e-6",
                   metavar="LIST", help="comma-separated decreasing deltas "
                   "(default 1e-1..1e-6)")
    q.set_defaults(func=_cmd_sequence)

    q = sub.add_parser("bound1912", parents=[common],
                       help="polynomial growth on the ellipse with foci +-1")
    q.add_argument("--coeffs", required=True, metavar="LIST",
                   help="real coefficients, ascending, comma-separated")
    q.add_argument("--R", type=float, required=True, metavar="R",
                   help="sum of the ellipse semi-axes, R > 1")
    q.set_defaults(func=_cmd_bound1912)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except NashkitError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
