"""Command line front end.

    nahmsolve solve    --config run.json [--s-grid 0.5:5:10] [--out res.json]
    nahmsolve verify   --config run.json --s 1.0
    nahmsolve basis    --config run.json --s 2.0
    nahmsolve perturb  --config run.json --order 2 [--s 4.0]
    nahmsolve zeromode --config run.json --s 1.0 --x 0.3,0.4,1.2
    nahmsolve oracle   --config run.json

Exit codes: 0 success, 1 invalid input, 2 numerical failure, 3 I/O error.
Failures print one JSON object to stderr. ``NAHM_LOG`` sets the log level.
"""

import argparse
import json
import logging
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import (basis_direct, basis_lagrange, config as config_mod, dirac, inner_product, nahm,
               oracles, perturbation, serialization)
from .errors import NahmError, ValidationError
from .geometry import spectral_data

log = logging.getLogger("nahmsolve")


def _setup_logging():
    level = os.environ.get("NAHM_LOG", "WARNING").upper()
    logging.basicConfig(stream=sys.stderr, level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")


def _parse_x(text):
    try:
        x = [float(v) for v in text.split(",")]
    except ValueError:
        raise ValidationError("--x expects x1,x2,x3, got %r" % text) from None
    if len(x) != 3:
        raise ValidationError("--x expects three comma separated numbers")
    return np.array(x)


def _check_writable(path):
    if path is None:
        return
    d = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(d) or not os.access(d, os.W_OK):
        raise OSError("cannot write to %s" % path)


def _emit(text, path):
    if path is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
        return
    with open(path, "w") as fh:
        fh.write(text if text.endswith("\n") else text + "\n")


def _checks(report, tol):
    r = report
    return {
        "nahm_residual": max(r["nahm_residuals"]) <= tol.nahm_residual,
        "lax_residual": r["lax_residual"] <= tol.lax_residual,
        "reality": max(r["reality_residual"], r["reality_residual_M"]) <= tol.reality,
        "spectrum": r["spectrum_residual"] <= tol.spectrum,
        "degree": max(r["degree_residuals"]) <= tol.degree,
        "gram": r["gram_residual"] <= tol.gram,
        "spread": r["gram_spread"] <= tol.spread,
    }


def _solver_gap(spectral, s):
    a = basis_direct.solve_basis_direct(spectral, s).coeffs
    b = basis_lagrange.solve_all_rows(spectral, s).coeffs
    return float(np.max(np.abs(a - b)) / max(np.max(np.abs(a)), 1e-300))


def _solve_one(spectral, s, cfg, timing):
    t0 = time.perf_counter()
    solver = "lagrange" if cfg.solver == "both" else cfg.solver
    frame = nahm.orthonormal_frame(spectral, s, solver, cfg.precision)
    T = nahm.nahm_matrices(spectral, s, frame)
    report = nahm.residuals(spectral, s, solver=solver, precision=cfg.precision).as_dict()
    if cfg.solver == "both":
        report["solver_agreement"] = _solver_gap(spectral, s)
    checks = _checks(report, cfg.tolerances)
    if cfg.solver == "both":
        checks["solver_agreement"] = report["solver_agreement"] <= cfg.tolerances.solver_agreement
    report["checks"] = checks
    report["within_tolerance"] = all(checks.values())
    wall = time.perf_counter() - t0 if timing else None
    log.info("s=%g done in %.3fs", s, time.perf_counter() - t0)
    return serialization.ResultRecord(float(s), T, report, cfg.solver, cfg.precision, wall)


def _grid_map(fn, grid, workers):
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            out = list(ex.map(fn, grid))
    else:
        out = [fn(s) for s in grid]
    return sorted(out, key=lambda r: r.s)


def cmd_solve(cfg, args):
    spectral = spectral_data(cfg.monopoles())
    records = _grid_map(lambda s: _solve_one(spectral, s, cfg, args.timing),
                        cfg.s_grid.values(), cfg.workers)
    if cfg.outputs.format == "csv":
        return serialization.records_to_csv(records)
    return serialization.dumps({"config": cfg.to_dict(),
                                "records": [r.to_json() for r in records]})


def cmd_verify(cfg, args):
    spectral = spectral_data(cfg.monopoles())
    records = _grid_map(lambda s: _solve_one(spectral, s, cfg, args.timing),
                        cfg.s_grid.values(), cfg.workers)
    boundary = nahm.boundary_report(spectral, args.s_small, args.s_large,
                                    precision=cfg.precision)
    out = {"reports": [{"s": r.s, **r.report} for r in records],
           "boundary": boundary.as_dict()}
    text = serialization.dumps(out)
    args.failed = not all(r.report["within_tolerance"] for r in records)
    return text


def cmd_basis(cfg, args):
    spectral = spectral_data(cfg.monopoles())
    out = []
    for s in cfg.s_grid.values():
        entry = {"s": float(s)}
        if cfg.solver in ("direct", "both"):
            entry["direct"] = basis_direct.solve_basis_direct(spectral, s).coeffs
        if cfg.solver in ("lagrange", "both"):
            q = basis_lagrange.solve_all_rows(spectral, s, precision=cfg.precision)
            entry["lagrange"] = q.coeffs
            entry["normalized"] = inner_product.normalize(q, spectral).coeffs
        if cfg.solver == "both":
            entry["solver_agreement"] = _solver_gap(spectral, s)
        out.append(entry)
    return serialization.dumps({"layout": "coeffs[row][sheet][degree] as [re, im]",
                                "bases": out})


def cmd_perturb(cfg, args):
    spectral = spectral_data(cfg.monopoles())
    if args.order < 0:
        raise ValidationError("--order must be >= 0")
    rows = [perturbation.series_to_json(perturbation.expand_basis(spectral, l, args.order),
                                        spectral) for l in range(spectral.n)]
    out = {"order": args.order, "rows": rows}
    if args.s is not None:
        out["s"] = float(args.s)
        out["max_error_vs_exact"] = perturbation.series_error(spectral, float(args.s),
                                                              args.order)
    return serialization.dumps(out)


def cmd_zeromode(cfg, args):
    if args.x is None:
        raise ValidationError("zeromode needs --x")
    x = _parse_x(args.x)
    pts = cfg.monopoles().points
    spectral = spectral_data(cfg.monopoles())
    dirac.monopole_fields(pts, x)  # rejects x at a source before any solve
    out = []
    for s in cfg.s_grid.values():
        frame = nahm.orthonormal_frame(spectral, s, precision=cfg.precision)
        for l in range(spectral.n):
            co = frame.Q.coeffs[l]
            psi = dirac.monopole_zero_mode(pts, s, x, co)
            out.append({"x": x, "s": float(s), "row": l, "spinor": psi,
                        "residual": dirac.adjoint_residual(pts, s, x, co),
                        "string_clearance": dirac.string_clearance(pts, x)})
    return serialization.dumps({"zero_modes": out})


def cmd_oracle(cfg, args):
    mono = cfg.monopoles()
    if mono.n > 2:
        raise ValidationError("closed forms exist for one or two points only")
    spectral = spectral_data(mono)
    rows, worst = [], 0.0
    for s in cfg.s_grid.values():
        T = nahm.nahm_matrices(spectral, s, precision=cfg.precision)
        ref = oracles.exact_n1(mono.points[0], s) if mono.n == 1 else \
            oracles.exact_n2(mono.points, s)
        dev = oracles.relative_deviation(T, ref)
        worst = max(worst, dev)
        rows.append({"s": float(s), "deviation": float(dev),
                     "gauge_aligned": oracles.gauge_align(T, ref).distance})
    args.summary = "max deviation %.3e" % worst
    return serialization.dumps({"comparisons": rows, "max_deviation": worst})


COMMANDS = {"solve": cmd_solve, "verify": cmd_verify, "basis": cmd_basis,
            "perturb": cmd_perturb, "zeromode": cmd_zeromode, "oracle": cmd_oracle}


def build_parser():
    p = argparse.ArgumentParser(prog="nahmsolve",
                                description="Nahm data for superposed Dirac monopoles.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", required=True, help="JSON run configuration")
    p.add_argument("--s", type=float, help="single s value (overrides the grid)")
    p.add_argument("--s-grid", help="a:b:k[:log] grid of s values")
    p.add_argument("--order", type=int, default=1, help="perturbation order")
    p.add_argument("--x", help="field point x1,x2,x3 for zeromode")
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--format", choices=config_mod.FORMATS)
    p.add_argument("--seed", type=int)
    p.add_argument("--timing", action="store_true", help="record wall times")
    p.add_argument("--s-small", type=float, default=1e-3)
    p.add_argument("--s-large", type=float, default=8.0)
    return p


def _fail(exc, code):
    err = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    sys.stderr.write(json.dumps(err) + "\n")
    return code


def main(argv=None):
    _setup_logging()
    args = build_parser().parse_args(argv)
    args.failed = False
    args.summary = None
    try:
        cfg = config_mod.load(args.config).with_overrides(
            s=args.s, s_grid=args.s_grid, seed=args.seed, out=args.out, fmt=args.format)
        _check_writable(cfg.outputs.path)
        text = COMMANDS[args.command](cfg, args)
        _emit(text, cfg.outputs.path)
    except NahmError as exc:
        return _fail(exc, exc.exit_code)
    except OSError as exc:
        return _fail(exc, 3)
    except (ValueError, np.linalg.LinAlgError, ArithmeticError) as exc:
        return _fail(exc, 2)
    if args.summary:
        sys.stderr.write(args.summary + "\n")
    return 2 if args.failed else 0


if __name__ == "__main__":
    sys.exit(main())
