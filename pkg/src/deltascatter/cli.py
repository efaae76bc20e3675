"""
Command-line front end.

    deltascatter amplitude --scene s.json --theta0 0 --theta 0.785
    deltascatter sweep --scene s.json --variable scattered_angle --grid 0:6.283:181 --out f.csv
    deltascatter compare --scene s.json --theta0 0.3 --theta 1.2
    deltascatter coincidence --scene s.json --pair 0,1 --grid 1e-2:1e-6:9:log --out c.csv
    deltascatter validate
    deltascatter plot --csv f.csv --out f.svg --log-y

Exit codes: 0 ok, 1 validation failure, 2 input error, 3 spectral
singularity, 4 kernel singularity. Errors go to stderr as ``Name: message``.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import oracle, renorm, specfun
from .amplitude import scattering_amplitude
from .coincidence import coincidence_sweep, place_pair
from .errors import (
    DeltaScatterError,
    DomainError,
    DuplicatePositionStandard,
    KernelSingularity,
    SpectralSingularity,
)
from .model import DirectionPair, Formulation, SceneConfig, Scatterer
from .scene_io import load_scene
from .svgplot import polyline_svg

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_INPUT = 2
EXIT_SPECTRAL = 3
EXIT_KERNEL = 4

SWEEP_HEADER = ["param", "re_f", "im_f", "abs_f", "dcs", "flag"]
COINCIDENCE_HEADER = ["ell", "k_ell", "re_f", "im_f", "abs_f", "ref_abs_f", "rel_err", "flag"]

J0_GRID = (0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0)
LAMBDA_RATIOS = (2.0, 5.0, 10.0, 100.0)
DISK_POINTS = tuple((0.25 + 0.35 * i, 0.5 + 0.2 * ((7 * i) % 11)) for i in range(20))


class InputError(DeltaScatterError):
    """Bad command-line input that is not a scene problem."""


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, SpectralSingularity):
        return EXIT_SPECTRAL
    # an exactly coincident standard pair is caught at validation time
    if isinstance(exc, (KernelSingularity, DuplicatePositionStandard)):
        return EXIT_KERNEL
    return EXIT_INPUT


def _complex_json(z):
    return {"re": z.real, "im": z.imag}


def _threads():
    raw = os.environ.get("DELTASCATTER_THREADS")
    if raw is None:
        return min(8, os.cpu_count() or 1)
    try:
        n = int(raw)
    except ValueError:
        raise InputError(f"DELTASCATTER_THREADS must be an integer, got {raw!r}") from None
    if n < 1:
        raise InputError("DELTASCATTER_THREADS must be at least 1")
    return n


def parse_grid(text):
    """``start:stop:count[:log]`` -> numpy array (endpoints included)."""
    parts = text.split(":")
    if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] not in ("log", "lin")):
        raise InputError(f"grid must look like start:stop:count[:log], got {text!r}")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise InputError(f"cannot parse grid {text!r}") from None
    if count < 2:
        raise InputError("grid count must be at least 2")
    if not (math.isfinite(start) and math.isfinite(stop)):
        raise InputError("grid endpoints must be finite")
    if len(parts) == 4 and parts[3] == "log":
        if start <= 0 or stop <= 0:
            raise InputError("log grid needs positive endpoints")
        return np.geomspace(start, stop, count)
    return np.linspace(start, stop, count)


def parse_pair(text):
    try:
        i, j = (int(p) for p in text.split(","))
    except ValueError:
        raise InputError(f"pair must look like i,j, got {text!r}") from None
    return i, j


def _dirs(args) -> DirectionPair:
    return DirectionPair(theta0=args.theta0, theta=args.theta, phi0=args.phi0, phi=args.phi)


def _amplitude_json(result):
    return {
        "f": _complex_json(result.f),
        "dcs": result.dcs,
        "diagnostics": {
            "condition_estimate": result.diagnostics.condition_estimate,
            "singular": result.diagnostics.singular,
        },
    }


def _emit(obj, stream):
    json.dump(obj, stream, indent=2, allow_nan=True)
    stream.write("\n")


def cmd_amplitude(args, out):
    scene = load_scene(args.scene)
    _emit(_amplitude_json(scattering_amplitude(scene, _dirs(args))), out)
    return EXIT_OK


def _sweep_point(scene: SceneConfig, dirs: DirectionPair, variable, pair, value):
    if variable == "scattered_angle":
        dirs = DirectionPair(dirs.theta0, value, dirs.phi0, dirs.phi)
    elif variable == "incident_angle":
        dirs = DirectionPair(value, dirs.theta, dirs.phi0, dirs.phi)
    else:
        scene = place_pair(scene, pair, value)
    try:
        f = scattering_amplitude(scene, dirs).f
    except DeltaScatterError as exc:
        return complex(math.nan, math.nan), exc
    return f, None


def _check_pair(scene, pair):
    i, j = pair
    if i == j or not (0 <= i < scene.n and 0 <= j < scene.n):
        raise InputError(f"pair {pair} does not name two scatterers of a {scene.n}-scatterer scene")


def cmd_sweep(args, out):
    scene = load_scene(args.scene)
    grid = parse_grid(args.grid)
    pair = parse_pair(args.pair)
    if args.variable == "separation":
        _check_pair(scene, pair)
        if np.any(grid <= 0):
            raise InputError("separation grid must be positive")
    dirs = _dirs(args)
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        results = list(pool.map(lambda v: _sweep_point(scene, dirs, args.variable, pair, v), grid))
    first_error = None
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(SWEEP_HEADER)
        for value, (f, exc) in zip(grid, results):
            flag = "" if exc is None else type(exc).__name__
            if exc is not None and first_error is None:
                first_error = exc
            writer.writerow([repr(float(value)), repr(f.real), repr(f.imag), repr(abs(f)),
                             repr(f.real * f.real + f.imag * f.imag), flag])
    if first_error is not None:
        print(f"{type(first_error).__name__}: {first_error} (rows flagged in {args.out})",
              file=sys.stderr)
        return exit_code_for(first_error)
    return EXIT_OK


def _branch(scene, dirs):
    try:
        return scattering_amplitude(scene, dirs).f, None
    except DeltaScatterError as exc:
        return None, {"error": type(exc).__name__, "message": str(exc)}


def cmd_compare(args, out):
    """Standard (couplings read as renormalized) against DFSS (couplings read as physical)."""
    scene = load_scene(args.scene)
    dirs = _dirs(args)
    report = {}
    values = {}
    for form in (Formulation.STANDARD, Formulation.DFSS):
        f, err = _branch(scene.with_formulation(form), dirs)
        values[form] = f
        report[form.value] = err if err else {"f": _complex_json(f), "dcs": abs(f) ** 2}
    fs, fd = values[Formulation.STANDARD], values[Formulation.DFSS]
    report["difference"] = None if fs is None or fd is None else {
        **_complex_json(fs - fd), "abs": abs(fs - fd)}
    if scene.n == 2:
        try:
            z1t, z2t = renorm.matched_couplings_for_scene(scene.with_formulation("dfss"), dirs)
            matched = SceneConfig(
                scene.dimension, scene.k,
                tuple(Scatterer(s.position, z) for s, z in zip(scene.scatterers, (z1t, z2t))),
                Formulation.STANDARD,
            )
            fm = scattering_amplitude(matched, dirs).f
            entry = {"couplings": [_complex_json(z1t), _complex_json(z2t)],
                     "standard_f": _complex_json(fm)}
            if fd is not None:
                entry["difference_abs"] = abs(fm - fd)
                entry["relative_difference"] = abs(fm - fd) / abs(fd) if fd != 0 else math.nan
            report["matched"] = entry
        except DeltaScatterError as exc:
            report["matched"] = {"error": type(exc).__name__, "message": str(exc)}
    elif scene.n == 1:
        # one delta: the renormalized coupling is the physical one
        report["matched"] = {"couplings": [_complex_json(scene.scatterers[0].coupling)]}
    _emit(report, out)
    return EXIT_OK


def cmd_coincidence(args, out):
    scene = load_scene(args.scene)
    grid = parse_grid(args.grid)
    pair = parse_pair(args.pair)
    _check_pair(scene, pair)
    if np.any(grid <= 0) or np.any(np.diff(grid) >= 0):
        raise InputError("coincidence grid must be positive and strictly decreasing")
    study = coincidence_sweep(scene, pair, grid, _dirs(args))
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(COINCIDENCE_HEADER)
        for row in study.rows():
            writer.writerow([repr(float(v)) for v in row[:-1]] + [row[-1]])
    errs = study.rel_err
    summary = {
        "reference": _complex_json(complex(study.reference)),
        "last_rel_err": float(errs[-1]),
        "fitted_rate": study.convergence_rate,
        "flagged": sum(1 for f in study.flags if f),
    }
    _emit(summary, out)
    return EXIT_OK


def _check(name, tolerance, pairs):
    report = oracle.CheckReport(name, tolerance)
    for point, dev in pairs:
        report.points.append(float(point))
        report.deviations.append(float(dev))
    return report


def _g2d_check():
    pairs = []
    for ratio in LAMBDA_RATIOS:
        quad = oracle.quad_g_lambda_2d(ratio, 1.0)
        pairs.append((ratio, abs(quad.value - renorm.g_lambda_zero_2d(ratio, 1.0).value)))
    return _check("g_lambda_2d", 1e-6, pairs)


def _g3d_checks():
    k, lam = 1.0, 100.0
    quad = oracle.quad_g_lambda_3d(lam, k).value
    real_ref = -lam / (2 * math.pi ** 2)
    imag_ref = -k / (4 * math.pi)
    return [
        _check("g_lambda_3d_real", 1e-2, [(lam, abs(quad.real - real_ref) / abs(real_ref))]),
        _check("g_lambda_3d_imag", 1e-4, [(lam, abs(quad.imag - imag_ref) / abs(imag_ref))]),
    ]


def _disk_check():
    pairs = []
    for a, k in DISK_POINTS:
        exact = oracle.disk_identity(a, k)
        pairs.append((a * k, abs(oracle.disk_integral(a, k).value - exact) / abs(exact)))
    return _check("disk_integral", 1e-8, pairs)


def _hankel_check():
    x = 1e-4
    series = 1 + 2j / math.pi * (math.log(x / 2) + specfun.EULER_GAMMA)
    value = specfun.hankel1_0(x)
    return _check("hankel_small_argument", 1e-7, [(x, abs(value - series) / abs(series))])


def run_validation(j0=None, y0=None):
    """Run every oracle check; returns ``(passed, report_dict)``.

    ``j0``/``y0`` replace the functions under test (fault injection).
    """
    j0 = j0 or specfun.bessel_j0
    y0 = y0 or specfun.bessel_y0
    jobs = [
        lambda: [oracle.j0_check(J0_GRID, j0=j0, tolerance=1e-11)],
        lambda: [oracle.y0_check(J0_GRID, y0=y0, tolerance=1e-10)],
        lambda: [_hankel_check()],
        lambda: [_g2d_check()],
        _g3d_checks,
        lambda: [_disk_check()],
    ]
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        futures = [pool.submit(job) for job in jobs]
        reports = []
        for fut in futures:
            try:
                reports.extend(fut.result())
            except DeltaScatterError as exc:
                reports.append(oracle.CheckReport(type(exc).__name__, 0.0, [math.inf], []))
    checks = {r.name: r.as_dict() for r in reports}
    passed = all(r.passed for r in reports)
    return passed, {"passed": passed, "checks": checks}


def cmd_validate(args, out, j0=None):
    passed, report = run_validation(j0=j0)
    _emit(report, out)
    return EXIT_OK if passed else EXIT_VALIDATION


def _read_plot_csv(path):
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    if not rows:
        raise InputError(f"{path} is empty")
    header = rows[0]
    if "abs_f" not in header:
        raise InputError(f"{path} has no abs_f column")
    xcol = "param" if "param" in header else "k_ell" if "k_ell" in header else None
    if xcol is None:
        raise InputError(f"{path} has neither a param nor a k_ell column")
    ix, iy = header.index(xcol), header.index("abs_f")
    xs, ys = [], []
    for n, row in enumerate(rows[1:], start=2):
        try:
            xs.append(float(row[ix]))
            ys.append(float(row[iy]))
        except (ValueError, IndexError):
            raise InputError(f"{path}, line {n}: malformed row") from None
    return xcol, xs, ys


def cmd_plot(args, out):
    xcol, xs, ys = _read_plot_csv(args.csv)
    svg = polyline_svg(xs, ys, log_x=args.log_x, log_y=args.log_y, xlabel=xcol, ylabel="abs_f")
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(svg)
    return EXIT_OK


def _add_angles(p):
    p.add_argument("--theta0", type=float, default=0.0, help="incident angle (rad)")
    p.add_argument("--phi0", type=float, default=0.0, help="incident azimuth, 3D (rad)")
    p.add_argument("--theta", type=float, default=0.0, help="scattered angle (rad)")
    p.add_argument("--phi", type=float, default=0.0, help="scattered azimuth, 3D (rad)")


def build_parser():
    parser = argparse.ArgumentParser(prog="deltascatter",
                                     description="Scattering by point (delta) scatterers.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("amplitude", help="amplitude for one pair of directions (JSON)")
    p.add_argument("--scene", required=True)
    _add_angles(p)

    p = sub.add_parser("sweep", help="amplitude along a grid (CSV)")
    p.add_argument("--scene", required=True)
    p.add_argument("--variable", default="scattered_angle",
                   choices=["scattered_angle", "incident_angle", "separation"])
    p.add_argument("--grid", required=True, help="start:stop:count[:log]")
    p.add_argument("--pair", default="0,1", help="pair moved by a separation sweep")
    p.add_argument("--out", required=True)
    _add_angles(p)

    p = sub.add_parser("compare", help="standard vs DFSS amplitudes (JSON)")
    p.add_argument("--scene", required=True)
    _add_angles(p)

    p = sub.add_parser("coincidence", help="shrink one pair's separation (CSV + JSON summary)")
    p.add_argument("--scene", required=True)
    p.add_argument("--pair", default="0,1")
    p.add_argument("--grid", required=True, help="decreasing separations, start:stop:count[:log]")
    p.add_argument("--out", required=True)
    _add_angles(p)

    sub.add_parser("validate", help="run the quadrature oracle checks (JSON)")

    p = sub.add_parser("plot", help="SVG polyline of abs_f from a sweep/coincidence CSV")
    p.add_argument("--csv", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--log-y", action="store_true")
    p.add_argument("--log-x", action="store_true")
    return parser


_COMMANDS = {
    "amplitude": cmd_amplitude,
    "sweep": cmd_sweep,
    "compare": cmd_compare,
    "coincidence": cmd_coincidence,
    "plot": cmd_plot,
}


def main(argv=None, *, stdout=None, j0_hook=None) -> int:
    """Entry point; ``j0_hook`` swaps the J0 under test in ``validate``."""
    out = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        if args.command == "validate":
            return cmd_validate(args, out, j0=j0_hook)
        return _COMMANDS[args.command](args, out)
    except (DeltaScatterError, DomainError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return exit_code_for(exc)
    except OSError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
