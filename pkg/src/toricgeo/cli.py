"""Command-line interface: batch commands over spec files, CSV + JSON reports.

Every command reads function specs from JSON files, runs one library
operation, and writes a deterministic JSON report (sorted keys) plus, where
values on a grid are produced, an RFC 4180 CSV with columns x1..xn,value.
Exit codes: 0 success, 2 parameter/input error, 3 verdict disagreement under
``check --strict`` (and failed cases under ``verify``).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from .errors import ToricError
from .funcspec import load_spec
from .lattice import DomainSpec, build_grid, sample
from .legendre import conjugate


def _write_csv(path: Path, points: np.ndarray, values: np.ndarray):
    n = points.shape[1]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"x{i + 1}" for i in range(n)] + ["value"])
        for pt, v in zip(points, values.ravel()):
            writer.writerow([repr(float(c)) for c in pt] + [repr(float(v))])


def _write_report(path: Path, payload: dict):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _config_echo(args) -> dict:
    skip = {"func"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _grid(args, dimension: int):
    return build_grid(
        DomainSpec(dimension, depth=args.depth), args.grid_size
    )


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_conjugate(args) -> int:
    spec = load_spec(args.spec)
    f = sample(spec, _grid(args, spec.dimension))
    fstar = conjugate(f)
    out = _out_dir(args)
    _write_csv(out / "conjugate_values.csv", fstar.dual_grid.points(), fstar.values)
    _write_report(
        out / "conjugate_report.json",
        {
            "command": "conjugate",
            "config": _config_echo(args),
            "dual_shape": list(fstar.dual_grid.shape),
            "finite_nodes": int(np.sum(np.abs(fstar.values) < 1e290)),
        },
    )
    return 0


def cmd_envelope(args) -> int:
    from .envelopes import envelope_pair

    f_spec, g_spec = load_spec(args.u0), load_spec(args.u1)
    grid = _grid(args, f_spec.dimension)
    env = envelope_pair(sample(f_spec, grid), sample(g_spec, grid))
    out = _out_dir(args)
    _write_csv(out / "envelope_values.csv", grid.points(), env.values)
    _write_report(
        out / "envelope_report.json",
        {
            "command": "envelope",
            "config": _config_echo(args),
            "grid_shape": list(grid.shape),
            "min_value": float(np.min(env.values)),
        },
    )
    return 0


def cmd_rooftop(args) -> int:
    from .envelopes import rooftop_limit

    f_spec, g_spec = load_spec(args.u0), load_spec(args.u1)
    result = rooftop_limit(f_spec, g_spec, resolution=args.grid_size)
    out = _out_dir(args)
    _write_csv(out / "rooftop_values.csv", result.probe_points, result.estimate)
    _write_report(
        out / "rooftop_report.json",
        {
            "command": "rooftop",
            "config": _config_echo(args),
            "converged_to_f": result.converged_to_f,
            "residual": result.residual,
            "verdict_tol": result.verdict_tol,
            "history": list(result.history),
        },
    )
    return 0


def cmd_newton(args) -> int:
    from .asymptotics import newton_body
    from .legendre import DualGrid

    spec = load_spec(args.spec)
    axis = np.linspace(-0.5, args.dual_max, args.dual_size)
    body = newton_body(spec, DualGrid(axes=(axis,) * spec.dimension), depth=args.depth)
    out = _out_dir(args)
    _write_csv(
        out / "newton_values.csv",
        body.dual_grid.points(),
        body.mask.astype(np.float64),
    )
    _write_report(
        out / "newton_report.json",
        {
            "command": "newton",
            "config": _config_echo(args),
            "member_nodes": int(body.mask.sum()),
            "dual_shape": list(body.dual_grid.shape),
        },
    )
    return 0


def cmd_slopes(args) -> int:
    from .asymptotics import default_curves, slope_condition

    f_spec, g_spec = load_spec(args.u0), load_spec(args.u1)
    report = slope_condition(f_spec, g_spec, default_curves(f_spec.dimension, args.bmax))
    out = _out_dir(args)
    _write_report(
        out / "slopes_report.json",
        {
            "command": "slopes",
            "config": _config_echo(args),
            "holds": report.holds,
            "worst_curve": list(report.worst_curve.exponents),
            "worst_gap": report.worst_gap,
            "slopes": [
                {"curve": list(c.exponents), "slope_u0": sf, "slope_u1": sg}
                for c, sf, sg in report.slopes
            ],
        },
    )
    return 0


def cmd_geodesic(args) -> int:
    from .geodesics import geodesic_at, geodesic_oracle

    f_spec, g_spec = load_spec(args.u0), load_spec(args.u1)
    grid = _grid(args, f_spec.dimension)
    out = _out_dir(args)
    if args.oracle:
        slices = geodesic_oracle(f_spec, g_spec, grid, time_resolution=args.time_res)
        sl = min(slices, key=lambda s: abs(s.t - args.t))
    else:
        sl = geodesic_at(f_spec, g_spec, args.t, grid=grid)
    _write_csv(out / "geodesic_values.csv", grid.points(), sl.values.values)
    _write_report(
        out / "geodesic_report.json",
        {
            "command": "geodesic",
            "config": _config_echo(args),
            "t": sl.t,
            "min_value": float(np.min(sl.values.values)),
            "is_convex": bool(sl.values.is_convex),
        },
    )
    return 0


def cmd_energy(args) -> int:
    from .models import RadialProfile, energy_e1

    est = energy_e1(RadialProfile.power(args.alpha))
    out = _out_dir(args)
    _write_report(
        out / "energy_report.json",
        {
            "command": "energy",
            "config": _config_echo(args),
            "alpha": args.alpha,
            "partials": [float(v) for v in est.partials],
            "truncations": [float(v) for v in est.truncations],
            "verdict": est.verdict,
            "value": est.value,
            "calibration": est.calibration,
        },
    )
    return 0


def cmd_check(args) -> int:
    from .geodesics import theorem_check

    f_spec, g_spec = load_spec(args.u0), load_spec(args.u1)
    report = theorem_check(f_spec, g_spec, b_max=args.bmax, epsilon=args.epsilon)
    out = _out_dir(args)
    _write_report(
        out / "check_report.json",
        {
            "command": "check",
            "config": _config_echo(args),
            "verdict_slopes": report.verdict_slopes,
            "verdict_rooftop": report.verdict_rooftop,
            "agreement": report.agreement,
            "measure_trace": [[t, m] for t, m in report.measure_trace],
            "diagnostics": report.diagnostics,
        },
    )
    if args.strict and not report.agreement:
        return 3
    return 0


def cmd_verify(args) -> int:
    from .verify import SUITES

    names = list(SUITES) if args.suite == "all" else [args.suite]
    reports = [SUITES[name](seed=args.seed) for name in names]
    out = _out_dir(args)
    _write_report(
        out / "verify_report.json",
        {
            "command": "verify",
            "config": _config_echo(args),
            "suites": [r.to_json() for r in reports],
        },
    )
    return 0 if all(r.failures == 0 for r in reports) else 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="toricgeo",
        description="Geodesics, envelopes and Newton bodies of toric psh functions "
        "in log coordinates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, spec_pair=False, spec_single=False):
        if spec_single:
            p.add_argument("--spec", required=True, help="function spec JSON file")
        if spec_pair:
            p.add_argument("--u0", required=True, help="endpoint spec at t=0 (JSON)")
            p.add_argument("--u1", required=True, help="endpoint spec at t=1 (JSON)")
        p.add_argument("--grid-size", type=int, default=257, help="nodes per axis")
        p.add_argument("--depth", type=float, default=8.0, help="grid depth L")
        p.add_argument("--out", default=".", help="output directory")

    p = sub.add_parser("conjugate", help="discrete convex conjugate of a spec")
    common(p, spec_single=True)
    p.set_defaults(func=cmd_conjugate)

    p = sub.add_parser("envelope", help="convex envelope P(u0, u1)")
    common(p, spec_pair=True)
    p.set_defaults(func=cmd_envelope)

    p = sub.add_parser("rooftop", help="rooftop limit lim_c P(u0, u1 + c)")
    common(p, spec_pair=True)
    p.set_defaults(func=cmd_rooftop)

    p = sub.add_parser("newton", help="Newton body of a spec on a dual grid")
    common(p, spec_single=True)
    p.add_argument("--dual-max", type=float, default=3.5)
    p.add_argument("--dual-size", type=int, default=41)
    p.set_defaults(func=cmd_newton)

    p = sub.add_parser("slopes", help="directional slope comparison along curves")
    common(p, spec_pair=True)
    p.add_argument("--bmax", type=int, default=5, help="max integer curve exponent")
    p.set_defaults(func=cmd_slopes)

    p = sub.add_parser("geodesic", help="one geodesic slice u_t")
    common(p, spec_pair=True)
    p.add_argument("--t", type=float, default=0.5)
    p.add_argument("--time-res", type=int, default=33)
    p.add_argument("--oracle", action="store_true", help="use the joint (x,t) envelope")
    p.set_defaults(func=cmd_geodesic)

    p = sub.add_parser("energy", help="truncated E1 energy of a radial power profile")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_energy)

    p = sub.add_parser("check", help="two-sided endpoint-convergence check")
    common(p, spec_pair=True)
    p.add_argument("--bmax", type=int, default=5)
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--strict", action="store_true", help="exit 3 on verdict disagreement")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("verify", help="randomized property suites")
    p.add_argument(
        "--suite",
        default="all",
        choices=["all", "conjugate", "envelope", "equivalence", "endpoint"],
    )
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except json.JSONDecodeError as exc:
        print(
            f"error: malformed spec JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}",
            file=sys.stderr,
        )
        return 2
    except (ToricError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
