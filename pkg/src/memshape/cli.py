"""Command-line surface: reproducible, scriptable runs with CSV/JSON output.

Every run writes a CSV body (when rows are produced) plus a JSON header
carrying the package version, the command, a full parameter echo, the sign
convention, and timestamps.  Timestamps live only in the JSON header, so
identical invocations produce byte-identical CSV bodies.

Exit codes: 0 success, 2 input error, 3 verification failure, 4 numeric
(quadrature/convergence) failure.

A config file of ``key = value`` lines supplies defaults; explicit flags
override it.  Keys use the flag spelling without the leading dashes, e.g.
``epsilon = 0.5`` or ``form = u``.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import List, Optional, Sequence

from . import __version__
from .errors import (
    DomainError,
    IdenticallyZero,
    MemshapeError,
    OpenProfile,
    QuadratureFailure,
)
from .geometry import SIGN_CONVENTION, CassiniOval, curvature_point
from .residuals import (
    MembraneParams,
    canonical_orientation,
    residual_report,
    sphere_solve,
)
from .energy import energy_sweep, fit_sweep, fit_parameters, helfrich_energy
from .cmc import build_composite, composite_metrics
from .exact.theorem import verify_theorem_symbolic

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_VERIFY = 3
EXIT_NUMERIC = 4


class _InputError(Exception):
    """Invalid CLI input; message names the offending parameter."""


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def _metadata(command: str, args_echo: dict) -> dict:
    return {
        "version": __version__,
        "command": command,
        "parameters": args_echo,
        "sign_convention": SIGN_CONVENTION,
        "generated_at": _now(),
    }


def _write_outputs(
    base: str,
    fmt: str,
    header: dict,
    rows: List[dict],
    columns: Sequence[str],
) -> List[str]:
    """CSV body + JSON header (fmt=csv) or a single JSON document (fmt=json).

    Floats serialize as their shortest round-trip decimal."""
    written = []
    base_path = Path(base)
    if fmt == "csv":
        csv_path = base_path.with_suffix(".csv")
        with open(csv_path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(columns)
            for row in rows:
                writer.writerow([_cell(row[c]) for c in columns])
        written.append(str(csv_path))
        json_path = base_path.with_suffix(".json")
        with open(json_path, "w") as fh:
            json.dump(header, fh, indent=2)
            fh.write("\n")
        written.append(str(json_path))
    elif fmt == "json":
        json_path = base_path.with_suffix(".json")
        doc = dict(header)
        doc["rows"] = rows
        with open(json_path, "w") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
        written.append(str(json_path))
    else:
        raise _InputError(f"format: unknown value {fmt!r} (use csv or json)")
    return written


def _cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse_eps_list(values: Sequence[float], name: str = "epsilon") -> List[float]:
    out = []
    for v in values:
        if v < 0:
            raise _InputError(f"{name}: must be >= 0, got {v}")
        out.append(float(v))
    return out


def _params_from_args(args) -> MembraneParams:
    try:
        return MembraneParams(
            beta=args.beta,
            c0=args.c0,
            lambda_bar=getattr(args, "lambda_bar"),
            p_bar=args.pressure,
        )
    except ValueError as exc:
        raise _InputError(str(exc)) from exc


def _add_param_flags(sub) -> None:
    sub.add_argument("--beta", type=float, default=1.0, help="bending rigidity")
    sub.add_argument("--c0", type=float, default=0.0, help="spontaneous curvature")
    sub.add_argument(
        "--lambda", dest="lambda_bar", type=float, default=0.0, help="normalized tension"
    )
    sub.add_argument(
        "--pressure", type=float, default=0.0, help="normalized pressure difference"
    )


def _add_common_flags(sub, default_output: str) -> None:
    sub.add_argument("--output", default=default_output, help="output base path")
    sub.add_argument("--format", choices=("csv", "json"), default="csv")
    sub.add_argument("--seed", type=int, default=0, help="echoed into metadata")
    sub.add_argument("--config", default=None, help="key = value defaults file")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_residual(args) -> int:
    if args.epsilon < 0:
        raise _InputError(f"epsilon: must be >= 0, got {args.epsilon}")
    if args.n < 2:
        raise _InputError(f"n: must be >= 2, got {args.n}")
    if not 0.0 < args.margin < 0.5:
        raise _InputError(f"margin: must lie in (0, 0.5), got {args.margin}")
    params = _params_from_args(args)
    profile = CassiniOval(args.epsilon)
    report = residual_report(profile, params, args.form, args.n, args.margin)
    header = _metadata("residual", _echo(args))
    header.update(report.to_json())
    rows = [
        {"r": r, "residual": v} for r, v in zip(report.grid, report.residuals)
    ]
    paths = _write_outputs(args.output, args.format, header, rows, ("r", "residual"))
    print(f"residual: sup_norm={report.sup_norm!r} -> {', '.join(paths)}")
    return EXIT_OK


def _cmd_energy(args) -> int:
    eps_list = _parse_eps_list(args.epsilon)
    params = _params_from_args(args)
    rows = energy_sweep(eps_list, params)
    header = _metadata("energy", _echo(args))
    header["params"] = params.to_json()
    cols = ("epsilon", "area", "volume", "bending", "total", "quad_error")
    paths = _write_outputs(args.output, args.format, header, rows, cols)
    print(f"energy: {len(rows)} row(s) -> {', '.join(paths)}")
    return EXIT_OK


def _cmd_fit(args) -> int:
    eps_list = _parse_eps_list(args.epsilon)
    if not 0.0 < args.margin < 0.5:
        raise _InputError(f"margin: must lie in (0, 0.5), got {args.margin}")
    rows = fit_sweep(eps_list, weight=args.weight, margin=args.margin)
    header = _metadata("fit", _echo(args))
    cols = ("epsilon", "c0_opt", "lambda_opt", "p_opt", "l2_residual", "sup_residual")
    paths = _write_outputs(args.output, args.format, header, rows, cols)
    print(f"fit: {len(rows)} row(s) -> {', '.join(paths)}")
    return EXIT_OK


def _cmd_verify_theorem(args) -> int:
    header = _metadata("verify-theorem", _echo(args))
    ok = True
    if args.mode in ("symbolic", "both"):
        verdict = verify_theorem_symbolic()
        header["symbolic"] = verdict.to_json()
        ok = ok and verdict.verdict == "CONTRADICTION"
    if args.mode in ("numeric", "both"):
        grid = [float(x) for x in args.grid.split(",") if x.strip()]
        numeric_rows = []
        all_positive = True
        for eps in grid:
            fr = fit_parameters(eps)
            positive = fr.l2_residual**2 > 10.0 * fr.quad_error
            all_positive = all_positive and positive
            numeric_rows.append(
                {
                    "epsilon": eps,
                    "l2_residual": fr.l2_residual,
                    "quad_error": fr.quad_error,
                    "positive": positive,
                }
            )
        header["numeric"] = {
            "grid": grid,
            "rows": numeric_rows,
            "all_residuals_positive": all_positive,
        }
        ok = ok and all_positive
    header["verified"] = ok
    json_path = Path(args.output).with_suffix(".json")
    with open(json_path, "w") as fh:
        json.dump(header, fh, indent=2)
        fh.write("\n")
    if not ok:
        print(f"verify-theorem: FAILED -> {json_path}", file=sys.stderr)
        return EXIT_VERIFY
    print(f"verify-theorem: OK (verdict recorded) -> {json_path}")
    return EXIT_OK


def _cmd_sphere(args) -> int:
    params = _params_from_args(args)
    try:
        orientation = canonical_orientation(args.orientation)
    except ValueError as exc:
        raise _InputError(f"orientation: {exc}") from exc
    try:
        radii = sphere_solve(params, orientation)
        identically_zero = False
    except IdenticallyZero:
        radii = []
        identically_zero = True
    header = _metadata("sphere", _echo(args))
    header["identically_zero"] = identically_zero
    header["admissible_radii"] = radii
    rows = [{"radius": r} for r in radii]
    paths = _write_outputs(args.output, args.format, header, rows, ("radius",))
    print(f"sphere: {len(radii)} radius(ii), identically_zero={identically_zero} -> {', '.join(paths)}")
    return EXIT_OK


def _cmd_rbc(args) -> int:
    if args.r_infl <= 0:
        raise _InputError(f"r-infl: must be positive, got {args.r_infl}")
    if args.inner_sign not in (1, -1):
        raise _InputError(f"inner-sign: must be +1 or -1, got {args.inner_sign}")
    params = _params_from_args(args)
    composite = build_composite(args.kappa0, args.a, args.r_infl, args.inner_sign)
    metrics = composite_metrics(composite, params)
    rows = composite.export_rows(args.n, args.n)
    header = _metadata("rbc", _echo(args))
    header["metrics"] = metrics.to_json()
    header["r_rim"] = composite.r_rim
    header["h_inner"] = composite.inner.h_const
    header["h_outer"] = composite.outer.h_const
    header["c_outer"] = composite.outer.c_int
    cols = ("r", "z_upper", "z_lower", "branch_id", "psi", "H")
    paths = _write_outputs(args.output, args.format, header, rows, cols)
    print(f"rbc: rim={composite.r_rim!r} area={metrics.area!r} -> {', '.join(paths)}")
    return EXIT_OK


def _cmd_profile_export(args) -> int:
    if args.epsilon < 0:
        raise _InputError(f"epsilon: must be >= 0, got {args.epsilon}")
    if args.n < 2:
        raise _InputError(f"n: must be >= 2, got {args.n}")
    profile = CassiniOval(args.epsilon)
    lo, hi = profile.domain.margined(args.margin)
    rows = []
    for i in range(args.n):
        r = lo + (hi - lo) * i / (args.n - 1)
        cp = curvature_point(profile, r)
        rows.append(
            {
                "r": r,
                "z_upper": profile.z(r),
                "z_lower": -profile.z(r),
                "u": profile.u(r),
                "psi": cp.psi,
                "H": cp.H,
                "K": cp.K,
            }
        )
    header = _metadata("profile-export", _echo(args))
    header["epsilon"] = args.epsilon
    cols = ("r", "z_upper", "z_lower", "u", "psi", "H", "K")
    paths = _write_outputs(args.output, args.format, header, rows, cols)
    print(f"profile-export: {len(rows)} row(s) -> {', '.join(paths)}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser assembly
# ---------------------------------------------------------------------------


def _echo(args) -> dict:
    skip = {"func", "config"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="memshape",
        description="Axisymmetric membrane-shape toolkit: residuals, energies, "
        "exact equilibrium verification, and constant-curvature cell profiles.",
    )
    parser.add_argument("--version", action="version", version=f"memshape {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("residual", help="shape-equation residual on a Cassini profile")
    p.add_argument("--epsilon", type=float, required=True, help="biconcavity (>= 0)")
    _add_param_flags(p)
    p.add_argument("--form", default="u", help="u | psi | third")
    p.add_argument("--n", type=int, default=64, help="grid points")
    p.add_argument("--margin", type=float, default=0.05, help="domain margin fraction")
    _add_common_flags(p, "memshape-residual")
    p.set_defaults(func=_cmd_residual)

    p = sub.add_parser("energy", help="area/volume/bending quadrature sweep")
    p.add_argument("--epsilon", type=float, nargs="+", required=True)
    _add_param_flags(p)
    _add_common_flags(p, "memshape-energy")
    p.set_defaults(func=_cmd_energy)

    p = sub.add_parser("fit", help="best-fit (c0, lambda, P) defect sweep")
    p.add_argument("--epsilon", type=float, nargs="+", required=True)
    p.add_argument("--weight", choices=("surface_measure", "uniform"), default="surface_measure")
    p.add_argument("--margin", type=float, default=0.05)
    _add_common_flags(p, "memshape-fit")
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("verify-theorem", help="verify no oval with eps > 0 is an equilibrium")
    p.add_argument("--mode", choices=("symbolic", "numeric", "both"), default="symbolic")
    p.add_argument(
        "--grid",
        default="0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0,1.1,1.2",
        help="epsilon grid for numeric mode (comma separated)",
    )
    _add_common_flags(p, "memshape-verify-theorem")
    p.set_defaults(func=_cmd_verify_theorem)

    p = sub.add_parser("sphere", help="admissible sphere radii for given parameters")
    _add_param_flags(p)
    p.add_argument("--orientation", default="I", help="I (H=-1/a) or II (H=+1/a)")
    _add_common_flags(p, "memshape-sphere")
    p.set_defaults(func=_cmd_sphere)

    p = sub.add_parser("rbc", help="two-branch constant-H cell profile and metrics")
    p.add_argument("--kappa0", type=float, required=True, help="reference curvature")
    p.add_argument("--a", type=float, required=True, help="curvature amplitude")
    p.add_argument("--r-infl", dest="r_infl", type=float, required=True, help="junction radius")
    p.add_argument("--inner-sign", dest="inner_sign", type=int, default=1)
    p.add_argument("--n", type=int, default=40, help="points per branch")
    _add_param_flags(p)
    _add_common_flags(p, "memshape-rbc")
    p.set_defaults(func=_cmd_rbc)

    p = sub.add_parser("profile-export", help="Cassini profile with curvature columns")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--n", type=int, default=128)
    p.add_argument("--margin", type=float, default=0.01)
    _add_common_flags(p, "memshape-profile")
    p.set_defaults(func=_cmd_profile_export)

    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: List[str]) -> List[str]:
    """Read --config key = value defaults and re-inject them as leading flags.

    Explicit flags win because argparse takes the last occurrence."""
    probe = argparse.ArgumentParser(add_help=False)
    probe.add_argument("--config", default=None)
    known, _ = probe.parse_known_args(argv)
    if not known.config:
        return argv
    path = Path(known.config)
    if not path.exists():
        raise _InputError(f"config: file not found: {path}")
    injected: List[str] = []
    for line in path.read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not key or not value:
            raise _InputError(f"config: malformed line {line!r}")
        flag = "--" + key.replace("_", "-")
        injected.extend([flag, *value.split()])
    if not argv:
        return injected
    # keep the subcommand first, then config defaults, then explicit flags
    return [argv[0], *injected, *argv[1:]]


def main(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _apply_config(parser, argv)
        args = parser.parse_args(argv)
        return args.func(args)
    except _InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (QuadratureFailure, OpenProfile, ArithmeticError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except MemshapeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
