"""Command line front end: named scans that write CSV (or JSON) tables.

    strongfield limit-scan --Z 1 --N 1 --y-perp "1,0" --B 1e6,1e9,1e12 -o ladder.csv
    strongfield meanfield-scan --lambdas 0.5,1,2 --z-ladder 5,10,20,40
    strongfield bounds-report --pairs 1:2,2:2,2:3
    strongfield superharmonic-check --center 1,0 --radii 0.5,0.25,0.125
    strongfield unbinding-scan --Z 1 --n-values 1,2,3
    strongfield eval scale_factor B=1e6

Every option can also come from ``--config FILE``, an INI file whose
``[scan]`` section uses the option names (``y_perp = 1,0``); flags on the
command line win. With ``--output`` the table goes to that file and the
resolved configuration to ``<output>.json``. Exit status: 0 success,
1 numeric failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import math
import sys

import numpy as np

from . import comparison, fewbody, landau, meanfield, schrod1d
from .errors import CapacityError, DomainError, NumericError
from .grid import Grid1D

EXIT_OK, EXIT_NUMERIC, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _floats(s):
    if isinstance(s, (list, tuple)):
        return [float(v) for v in s]
    return [float(v) for v in str(s).replace(" ", "").split(",") if v]


def _ints(s):
    return [int(v) for v in _floats(s)]


def _vectors(s):
    """'1,0;-1,0' -> [(1.0, 0.0), (-1.0, 0.0)]"""
    out = []
    for part in str(s).split(";"):
        if part.strip():
            v = _floats(part)
            if len(v) != 2:
                raise UsageError(f"transverse vectors need two components: {part!r}")
            out.append(tuple(v))
    return out


def _pairs(s):
    out = []
    for part in str(s).replace(" ", "").split(","):
        if part:
            z, n = part.split(":")
            out.append((float(z), int(n)))
    return out


# name -> (converter, default, help)
COMMON = {
    "seed": (int, 0, "seed of the random eigensolver start"),
}
SCANS = {
    "limit-scan": {
        "Z": (float, 1.0, "nuclear charge"),
        "N": (int, 1, "electron number"),
        "y_perp": (_vectors, "1,0", "transverse positions, ';'-separated 2-vectors"),
        "B": (_floats, None, "comma-separated field strengths"),
        "half_width": (float, None, "grid half width (default 40 for N=1, 20 otherwise)"),
        "dx": (float, 1e-3, "grid spacing for N=1"),
        "n": (int, None, "grid points per axis for N>=2"),
    },
    "meanfield-scan": {
        "lambdas": (_floats, "0.5,1,2", "lambda values for the minimizer table"),
        "z_ladder": (_floats, "5,10,20,40", "charges for the closed-form trend table"),
        "trend_lambda": (float, 1.0, "lambda = N/Z along the trend table"),
        "half_width": (float, 30.0, "grid half width for lambda < 2"),
        "wide_half_width": (float, 100.0, "grid half width for lambda >= 2"),
        "dx": (float, 0.02, "grid spacing"),
        "tol": (float, 1e-3, "allowed |minimizer - closed form|"),
    },
    "bounds-report": {
        "pairs": (_pairs, "1:2,2:2,2:3", "comma-separated Z:N pairs"),
        "epsilon": (float, 0.25, "exponent in a = N^(-1-eps), b = N^eps"),
        "sigma": (str, "meanfield", "trial density: meanfield or gaussian"),
        "sigma_width": (float, 2.0, "width of the gaussian trial density"),
        "half_width": (float, None, "few-body grid half width (default 20 for N<=2, 12 otherwise)"),
        "n": (int, None, "few-body fine grid points per axis"),
        "method": (str, "auto", "eigensolver: lanczos, lobpcg or auto"),
    },
    "superharmonic-check": {
        "Z": (float, 1.0, "nuclear charge"),
        "N": (int, 1, "electron number (1 or 2)"),
        "center": (_vectors, "1,0", "circle centers, ';'-separated"),
        "radii": (_floats, "0.5", "circle radii"),
        "angles": (int, 16, "equally spaced angles per circle"),
        "frozen": (_vectors, "0,1", "fixed second transverse position for N=2"),
        "half_width": (float, 30.0, "grid half width"),
        "n": (int, None, "grid points (default 3001 for N=1, 201 for N=2)"),
        "slack": (float, 1e-6, "allowed excess of the circle average"),
    },
    "unbinding-scan": {
        "Z": (float, 1.0, "nuclear charge"),
        "n_values": (_ints, "1,2,3", "electron numbers"),
        "family": (str, "delta_rescaled", "model family"),
        "half_width": (float, 16.0, "grid half width"),
        "n": (int, 65, "grid points per axis"),
    },
}


def _add_common(p):
    p.add_argument("--config", help="INI file with a [scan] section")
    p.add_argument("-o", "--output", help="output file (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default=None)


def build_parser():
    parser = argparse.ArgumentParser(prog="strongfield", description="Strong-field atom scans.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, options in SCANS.items():
        p = sub.add_parser(name)
        _add_common(p)
        for key, (_, _, hlp) in {**COMMON, **options}.items():
            p.add_argument("--" + key.replace("_", "-"), dest=key, default=None, help=hlp)
    p = sub.add_parser("eval", help="call one library operation: eval OP key=value ...")
    _add_common(p)
    p.add_argument("operation", choices=sorted(EVAL_OPS))
    p.add_argument("assignments", nargs="*")
    return parser


def resolve_config(args):
    """Merge defaults, the config file and command-line flags (in rising priority)."""
    options = {**COMMON, **SCANS.get(args.command, {})}
    from_file = {}
    if args.config:
        cp = configparser.ConfigParser()
        if not cp.read(args.config):
            raise UsageError(f"cannot read config file {args.config}")
        section = cp["scan"] if cp.has_section("scan") else cp.defaults()
        # configparser folds key case; map back onto the flag names
        names = {k.lower(): k for k in [*options, "output", "format"]}
        from_file = {names.get(k.replace("-", "_"), k): v for k, v in section.items()}
        unknown = set(from_file) - set(options) - {"output", "format"}
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
    params = {}
    for key, (conv, default, _) in options.items():
        raw = getattr(args, key, None)
        if raw is None:
            raw = from_file.get(key, default)
        try:
            params[key] = None if raw is None else conv(raw)
        except (ValueError, TypeError) as exc:
            raise UsageError(f"bad value for {key}: {raw!r}") from exc
    output = args.output or from_file.get("output")
    fmt = args.format or from_file.get("format") or "csv"
    return {"command": args.command, "params": params, "output_path": output, "format": fmt}


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return "%.17g" % v
    if isinstance(v, (list, tuple)):
        return ";".join(_fmt(x) for x in v)
    return str(v)


def _jsonable(v):
    if isinstance(v, (np.floating, np.integer, np.bool_)):
        return v.item()
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    return v


def write_table(rows, config, stream=None):
    columns = []
    for r in rows:
        columns.extend(k for k in r if k not in columns)
    if config["format"] == "json":
        text = json.dumps({"config": _jsonable(config), "rows": _jsonable(rows)}, indent=2) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_fmt(r.get(c)) for c in columns])
        text = buf.getvalue()
    path = config["output_path"]
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
        with open(path + ".json", "w", encoding="utf-8") as fh:
            json.dump(_jsonable(config), fh, indent=2, sort_keys=True)
            fh.write("\n")
    else:
        (stream or sys.stdout).write(text)


def _row_error(row, exc):
    row["status"] = f"{type(exc).__name__}: {exc}"
    return row


def run_limit_scan(p):
    Bs = p["B"]
    if not Bs:
        raise UsageError("limit-scan needs a non-empty B ladder")
    Z, N, y = p["Z"], p["N"], p["y_perp"]
    if len(y) != N:
        raise UsageError(f"need {N} transverse vectors, got {len(y)}")
    rows = []
    if N == 1:
        hw = p["half_width"] or 40.0
        grid = Grid1D.from_spacing(hw, p["dx"])
        target = -0.25 * Z * Z
        target_err = 0.0
    else:
        hw = p["half_width"] or 20.0
        n = p["n"] or fewbody.DEFAULT_POINTS.get(N, 41)
        grid = Grid1D(hw, n)
        res = fewbody.extrapolate_delta_energy(Z, N, [grid.coarsened(), grid], seed=p["seed"])
        target, target_err = res.report.energy, res.report.error_estimate
    prev = None
    for B in Bs:
        row = {"B": B, "L": None, "energy": None, "delta_bound": None, "target": target,
               "target_error": target_err, "gap": None, "gap_decreasing": None, "kinetic": None,
               "status": "ok", "n": grid.n, "half_width": grid.half_width, "seed": p["seed"]}
        try:
            row["L"] = landau.scale_factor(B)
            if N == 1:
                r = math.hypot(*y[0])
                v = schrod1d.scaled_coulomb_potential(B, r, grid, Z)
                rep, wf = schrod1d.ground_state(v, grid)
                T = schrod1d.kinetic_energy(wf)
                row["kinetic"] = T
                row["delta_bound"] = Z * landau.delta_bound(landau.DeltaBoundInputs(1.0, T, r, B))
            else:
                rep = fewbody.scaled_parametric_energy(Z, N, y, B, grid, p["seed"])
            row["energy"] = rep.energy
            row["gap"] = abs(rep.energy - target)
            row["gap_decreasing"] = None if prev is None else bool(row["gap"] < prev)
            prev = row["gap"]
        except (NumericError, CapacityError) as exc:
            _row_error(row, exc)
        rows.append(row)
    return rows


def run_meanfield_scan(p):
    rows = []
    for lam in p["lambdas"]:
        row = {"table": "minimizer", "lambda": lam, "closed_form": meanfield.hyperstrong_energy(lam),
               "minimizer": None, "diff": None, "within_tol": None, "status": "ok"}
        hw = p["wide_half_width"] if lam >= 2 else p["half_width"]
        grid = Grid1D.from_spacing(hw, p["dx"])
        row.update({"n": grid.n, "half_width": grid.half_width})
        try:
            e = 0.0 if lam == 0 else meanfield.minimize_hyperstrong(lam, grid).energy
            row["minimizer"] = e
            row["diff"] = abs(e - row["closed_form"])
            row["within_tol"] = bool(row["diff"] <= p["tol"])
        except NumericError as exc:
            _row_error(row, exc)
        rows.append(row)
    lam = p["trend_lambda"]
    target = meanfield.hyperstrong_energy(lam)
    prev = None
    for Z in p["z_ladder"]:
        N = int(round(lam * Z))
        # rescaled energy times Z^2 is the unscaled energy; divide by Z^3 for the mean-field scale
        scaled = comparison.comparison_energy(Z, N) / Z
        gap = scaled - target
        rows.append({"table": "trend", "lambda": lam, "Z": Z, "N": N, "closed_form": target,
                     "scaled_energy": scaled, "gap": gap,
                     "gap_decreasing": None if prev is None else bool(abs(gap) < abs(prev)), "status": "ok"})
        prev = gap
    return rows


def _numeric_energy(Z, N, hw, n, seed, method):
    grid = Grid1D(hw, n)
    if method == "auto":
        method = "lanczos" if N <= 2 else "lobpcg"
    res = fewbody.extrapolate_delta_energy(Z, N, [grid.coarsened(), grid], family="delta_rescaled",
                                           seed=seed, method=method)
    return res.report


def run_bounds_report(p):
    rows = []
    mf_cache = {}
    for Z, N in p["pairs"]:
        hw = p["half_width"] or (20.0 if N <= 2 else 12.0)
        n = p["n"] or {1: 4001, 2: 401, 3: 121}.get(N, 41)
        row = {"Z": Z, "N": N, "lower_bound": None, "lower_error": None, "numeric": None,
               "numeric_error": None, "upper": comparison.comparison_energy(Z, N), "ordering_ok": None,
               "status": "ok", "epsilon": p["epsilon"], "sigma": p["sigma"], "n": n, "half_width": hw,
               "seed": p["seed"]}
        try:
            bgrid = Grid1D(40.0, 8001)
            if p["sigma"] == "gaussian":
                sigma = meanfield.Density1D.gaussian(bgrid, p["sigma_width"])
            elif p["sigma"] == "meanfield":
                lam = N / Z
                if lam not in mf_cache:
                    mg = Grid1D.from_spacing(30.0 if lam < 2 else 100.0, 0.02)
                    mf_cache[lam] = meanfield.minimize_hyperstrong(lam, mg).density
                d = mf_cache[lam]
                sigma = meanfield.Density1D.projected(
                    bgrid, np.interp(bgrid.nodes, d.grid.nodes, d.values, left=0.0, right=0.0), 1.0)
            else:
                raise UsageError(f"unknown sigma {p['sigma']!r}")
            cert = meanfield.lower_bound(Z, N, sigma, p["epsilon"], bgrid)
            row["lower_bound"], row["lower_error"] = cert.lower_bound, cert.error_estimate
            rep = _numeric_energy(Z, N, hw, n, p["seed"], p["method"])
            row["numeric"], row["numeric_error"] = rep.energy, rep.error_estimate
            margin = rep.error_estimate + cert.error_estimate
            row["ordering_ok"] = bool(cert.lower_bound <= rep.energy + margin
                                      and rep.energy <= row["upper"] + rep.error_estimate)
        except (NumericError, CapacityError) as exc:
            _row_error(row, exc)
        rows.append(row)
    return rows


def run_superharmonic_check(p):
    rows = []
    Z, N = p["Z"], p["N"]
    n = p["n"] or (3001 if N == 1 else 201)
    grid = Grid1D(p["half_width"], n)
    for c in p["center"]:
        for radius in p["radii"]:
            row = {"Z": Z, "N": N, "center_x": c[0], "center_y": c[1], "radius": radius,
                   "angles": p["angles"], "center_energy": None, "circle_average": None,
                   "excess": None, "bounds_ok": None, "ok": None, "status": "ok",
                   "n": grid.n, "half_width": grid.half_width}
            try:
                res = fewbody.superharmonic_spot_check(Z, N, c, radius, p["angles"], grid,
                                                       frozen=p["frozen"][0] if N == 2 else None,
                                                       seed=p["seed"])
                row.update({"center_energy": res.center_energy, "circle_average": res.circle_average,
                            "excess": res.circle_average - res.center_energy, "bounds_ok": res.bounds_ok})
                row["ok"] = bool(row["excess"] <= p["slack"] and res.bounds_ok)
            except (NumericError, CapacityError) as exc:
                _row_error(row, exc)
            rows.append(row)
    return rows


def run_unbinding_scan(p):
    grid = Grid1D(p["half_width"], p["n"])
    rows = fewbody.unbinding_scan(p["Z"], p["n_values"], grid, p["family"], p["seed"])
    for r in rows:
        r.update({"exploratory": True, "family": p["family"], "n": grid.n, "half_width": grid.half_width})
    return rows


def _eval_hydrogen(B):
    return schrod1d.hydrogen_expansion(B).value


EVAL_OPS = {
    "scale_factor": (landau.scale_factor, {"B": float}),
    "normalization_integral": (lambda B, r: landau.normalization_integral(B, r)[0], {"B": float, "r": float}),
    "delta_bound": (lambda lam, T, r, B: landau.delta_bound(landau.DeltaBoundInputs(lam, T, r, B)),
                    {"lam": float, "T": float, "r": float, "B": float}),
    "optimal_radius": (landau.optimal_radius, {"lam": float, "T": float}),
    "landau_averaged_potential": (landau.landau_averaged_potential_closed, {"B": float, "z": float}),
    "discrete_delta_energy": (schrod1d.discrete_delta_energy, {"Z": float, "dx": float}),
    "hydrogen_expansion": (_eval_hydrogen, {"B": float}),
    "landau_hydrogen_energy": (lambda B: schrod1d.landau_hydrogen_energy(B).energy, {"B": float}),
    "parametric_energy": (lambda Z, N, x_perp: fewbody.parametric_energy(Z, N, x_perp).energy,
                          {"Z": float, "N": int, "x_perp": _vectors}),
    "comparison_energy": (comparison.comparison_energy, {"Z": float, "N": int}),
    "critical_number": (comparison.critical_number, {"Z": float}),
    "hyperstrong_energy": (meanfield.hyperstrong_energy, {"lam": float}),
    "minimize_hyperstrong": (lambda lam: meanfield.minimize_hyperstrong(lam).energy, {"lam": float}),
    "w_potential": (lambda Z, a, b, z: float(meanfield.w_potential(Z, a, b, z)),
                    {"Z": float, "a": float, "b": float, "z": float}),
    "verify_operator_inequality": (lambda b: meanfield.verify_operator_inequality(b).energy, {"b": float}),
}


def run_eval(args):
    fn, options = EVAL_OPS[args.operation]
    kwargs = {}
    for a in args.assignments:
        if "=" not in a:
            raise UsageError(f"expected key=value, got {a!r}")
        k, v = a.split("=", 1)
        if k not in options:
            raise UsageError(f"{args.operation} takes {sorted(options)}, got {k!r}")
        try:
            kwargs[k] = options[k](v)
        except ValueError as exc:
            raise UsageError(f"bad value for {k}: {v!r}") from exc
    missing = set(options) - set(kwargs)
    if missing:
        raise UsageError(f"missing arguments: {sorted(missing)}")
    value = fn(**kwargs)
    return [{"operation": args.operation, **{k: kwargs[k] for k in options}, "value": value}], kwargs


RUNNERS = {
    "limit-scan": run_limit_scan,
    "meanfield-scan": run_meanfield_scan,
    "bounds-report": run_bounds_report,
    "superharmonic-check": run_superharmonic_check,
    "unbinding-scan": run_unbinding_scan,
}


def main(argv=None, stream=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        if args.command == "eval":
            rows, kwargs = run_eval(args)
            config = {"command": "eval", "params": {"operation": args.operation, **kwargs},
                      "output_path": args.output, "format": args.format or "csv"}
        else:
            config = resolve_config(args)
            rows = RUNNERS[args.command](config["params"])
        write_table(rows, config, stream)
    except (UsageError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericError, CapacityError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    failed = any(r.get("status", "ok") != "ok" for r in rows)
    return EXIT_NUMERIC if failed else EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
