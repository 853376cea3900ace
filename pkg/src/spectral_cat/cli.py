"""Command-line interface: ``spectral-cat <command> [options]``.

Commands
--------
transform     predict corresponding colors for one XYZ or a CSV batch
reconstruct   reconstruct a reflectance (or illuminant) spectrum
eval          CIE94 evaluation over corresponding-color dataset files
gamut-sweep   optimum-slice robustness sweep toward the spectral locus
locus         dump the spectral-locus polygon

Exit codes: 0 success, 1 usage/configuration error, 2 some transform rows
failed, 3 reconstruction did not converge.
"""
import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__, _backend, cat, evaluation, gamut
from .errors import NoConvergence, SingularSystem, SpectralCatError
from .formats import fmt, read_cmf, read_spectrum, read_xyz_rows, spectrum_csv
from .methods import METHODS, Transform
from .recon import build_diff_matrix, reconstruct
from .spectra import (WAVELENGTHS, builtin_cmf, chromaticity, has_negative,
                      normalize_illuminant, resolve_white, weight_cmf)

EXIT_OK, EXIT_CONFIG, EXIT_ROWS, EXIT_NOCONV = 0, 1, 2, 3


class ConfigError(Exception):
    pass


def _meta(args):
    return {"tool": "spectral-cat", "version": __version__,
            "backend": _backend.NAME, "command": args.command}


def _xyz_arg(text):
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected X,Y,Z, got {text!r}") from None
    if len(vals) != 3:
        raise argparse.ArgumentTypeError(f"expected X,Y,Z, got {text!r}")
    return np.array(vals)


def _cmf(args):
    if args.cmf in (None, "builtin"):
        return builtin_cmf()
    return read_cmf(args.cmf)


def _white(text, scale):
    try:
        wp = resolve_white(text)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return cat.to_unit_scale(wp, scale)


def _emit(args, text):
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_sidecar(args, doc):
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).with_suffix(".json").write_text(text)
    else:
        sys.stderr.write(text)


def _csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


# ---------------------------------------------------------------- transform

def cmd_transform(args):
    if (args.xyz is None) == (args.input is None):
        raise ConfigError("give exactly one of --xyz or --input")
    src_wp = _white(args.src_wp, args.scale)
    dst_wp = _white(args.dst_wp, args.scale)
    if args.xyz is not None:
        ids, rows = ["0"], [args.xyz]
    else:
        ids, rows = read_xyz_rows(args.input)
    valid = [r for r in rows if r is not None]
    if args.scale == "0-100":
        factor = 100.0
    elif args.scale == "0-1":
        factor = 1.0
    else:
        factor = 100.0 if any(r[1] > cat.AUTO_SCALE_Y for r in valid) else 1.0
    try:
        cat_fn = Transform(args.method, src_wp / src_wp[1], dst_wp / dst_wp[1],
                           args.d, cmf=_cmf(args))
    except (SpectralCatError, ValueError) as exc:
        raise ConfigError(f"cannot prepare {args.method}: {exc}") from None

    records = []
    for rid, row in zip(ids, rows):
        rec = {"id": rid, "status": "ok", "error": ""}
        try:
            if row is None:
                raise ValueError("unparsable row")
            out = cat_fn(row / factor) * factor
            rec["xyz"] = out.tolist()
            rec["xy"] = chromaticity(out).tolist()
        except (SpectralCatError, ValueError) as exc:
            rec.update(status="failed", error=f"{type(exc).__name__}: {exc}")
        records.append(rec)

    if args.format == "json":
        _emit(args, json.dumps({"rows": records, "meta": _meta(args)},
                               indent=2) + "\n")
    else:
        table = []
        for rec in records:
            if rec["status"] == "ok":
                table.append([rec["id"], *map(fmt, rec["xyz"]),
                              *map(fmt, rec["xy"]), "ok", ""])
            else:
                table.append([rec["id"], "", "", "", "", "", "failed",
                              rec["error"]])
        _emit(args, _csv_text(["id", "X", "Y", "Z", "x", "y", "status", "error"],
                              table))
    failed = sum(r["status"] != "ok" for r in records)
    if failed:
        print(f"{failed} of {len(records)} rows failed", file=sys.stderr)
        return EXIT_ROWS
    return EXIT_OK


# -------------------------------------------------------------- reconstruct

def cmd_reconstruct(args):
    cmf = _cmf(args)
    sources = [args.illuminant_wp is not None, args.illuminant_file is not None,
               args.unweighted]
    if sum(sources) != 1:
        raise ConfigError("give exactly one of --illuminant-wp, "
                          "--illuminant-file or --unweighted")
    target = cat.to_unit_scale(args.xyz, args.scale)
    C = build_diff_matrix(cmf.shape[0])
    try:
        if args.unweighted:
            A_ref = cmf
        elif args.illuminant_file is not None:
            A_ref = weight_cmf(normalize_illuminant(
                read_spectrum(args.illuminant_file), cmf), cmf)
        else:
            wp = _white(args.illuminant_wp, args.scale)
            A_ref = weight_cmf(cat.reconstruct_illuminant(wp / wp[1], cmf, C), cmf)
    except SpectralCatError as exc:
        raise ConfigError(f"cannot build referencing illuminant: {exc}") from None

    try:
        res = reconstruct(A_ref, C, target)
    except NoConvergence as exc:
        print(f"no convergence: last residual {exc.residual_norm:.3e} after "
              f"{exc.iterations} iterations", file=sys.stderr)
        return EXIT_NOCONV
    except SingularSystem as exc:
        print(f"no convergence: {exc}", file=sys.stderr)
        return EXIT_NOCONV

    info = {"target": target.tolist(), "iterations": res.iterations,
            "residual_norm": res.residual_norm, "meta": _meta(args)}
    if args.format == "json":
        info["wavelength_nm"] = WAVELENGTHS.tolist()
        info["rho"] = res.rho.tolist()
        _emit(args, json.dumps(info, indent=2) + "\n")
    else:
        _emit(args, spectrum_csv(res.rho))
        _emit_sidecar(args, info)
    return EXIT_OK


# --------------------------------------------------------------------- eval

def cmd_eval(args):
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    bad = [m for m in methods if m not in METHODS]
    if bad or not methods:
        raise ConfigError(f"unknown methods {bad}; choose from {METHODS}")
    if not Path(args.data).is_dir():
        raise ConfigError(f"{args.data} is not a directory")
    loaded, errors = evaluation.load_directory(args.data)
    for path, msg in errors:
        print(f"skipping {path}: {msg}", file=sys.stderr)
    if not loaded:
        print("no dataset could be loaded", file=sys.stderr)
        return EXIT_CONFIG
    cmf = _cmf(args)

    reports = {}
    for method in methods:
        grouped, failures = {}, []
        for stem, ds in loaded:
            try:
                fn = Transform(method, ds.src_wp, ds.dst_wp, 1.0, cmf=cmf)
            except (SpectralCatError, ValueError) as exc:
                failures.extend((f"{stem}:{p.sample_id}", f"context: {exc}")
                                for p in ds.pairs)
                grouped.setdefault(ds.name, [])
                continue
            res, fails = evaluation.evaluate(fn, ds, prefix=f"{stem}:")
            grouped.setdefault(ds.name, []).extend(res)
            failures.extend(fails)
        reports[method] = evaluation.summarize(grouped, failures)

    names = evaluation.ordered_names(ds.name for _, ds in loaded)
    rows = [[name] + [fmt(reports[m].per_dataset_mean.get(name, np.nan))
                      for m in methods] for name in names]
    rows.append(["Mean (All Datasets)"]
                + [fmt(reports[m].weighted_mean_all) for m in methods])
    rows.append(["Mean (No McCann)"]
                + [fmt(reports[m].weighted_mean_no_mccann) for m in methods])
    doc = {"reports": {m: r.to_dict() for m, r in reports.items()},
           "load_errors": [[p, e] for p, e in errors], "meta": _meta(args)}
    if args.format == "json":
        _emit(args, json.dumps(doc, indent=2) + "\n")
    else:
        _emit(args, _csv_text(["dataset", *methods], rows))
        if args.out:
            _emit_sidecar(args, doc)
    for m, r in reports.items():
        if r.failures:
            print(f"{m}: {len(r.failures)} samples failed", file=sys.stderr)
    return EXIT_OK


# -------------------------------------------------------------- gamut-sweep

SWEEP_HEADER = ["angle_index", "src_x", "src_y", "dst_x", "dst_y", "inside",
                "negative"]


def cmd_gamut_sweep(args):
    if not 0 <= args.fraction < 1:
        raise ConfigError("--fraction must be in [0, 1)")
    if not 0 < args.y_slice < 1:
        raise ConfigError("--y-slice must be in (0, 1)")
    if args.count < 1 or args.samples < 3:
        raise ConfigError("--count must be >= 1 and --samples >= 3")
    cmf = _cmf(args)
    poly = gamut.locus_polygon(cmf)
    src_wp = _white(args.src_wp, args.scale)
    src_wp = src_wp / src_wp[1]
    try:
        W_S = cat.reconstruct_illuminant(src_wp, cmf)
    except SpectralCatError as exc:
        raise ConfigError(f"source white not reconstructible: {exc}") from None
    slice_xyz = np.array([xyz for _, xyz in
                          gamut.optimum_slice(W_S, cmf, args.y_slice, args.samples)])
    src_xy = chromaticity(slice_xyz)
    center = chromaticity(src_wp)
    if not gamut.contains(poly, center):
        raise ConfigError("source white lies outside the spectral locus")
    dests = gamut.sweep_destinations(center, args.fraction, args.count, poly)

    rows, summary = [], []
    for k, dst_wp in enumerate(dests):
        entry = {"angle_index": k, "dst_wp": dst_wp.tolist(),
                 "points": len(slice_xyz)}
        try:
            fn = Transform(args.method, src_wp, dst_wp, 1.0, cmf=cmf)
            out, ok = fn.batch(slice_xyz)
        except SpectralCatError as exc:
            entry["error"] = f"{type(exc).__name__}: {exc}"
            out = np.full_like(slice_xyz, np.nan)
            ok = np.zeros(len(slice_xyz), dtype=bool)
        dst_xy = np.full((len(out), 2), np.nan)
        with np.errstate(divide="ignore", invalid="ignore"):
            sums = out[ok].sum(axis=1)
            dst_xy[ok] = out[ok, :2] / sums[:, None]
        inside = np.zeros(len(out), dtype=bool)
        finite = ok & np.all(np.isfinite(dst_xy), axis=1)
        inside[finite] = gamut.contains(poly, dst_xy[finite])
        negative = np.zeros(len(out), dtype=bool)
        negative[ok] = has_negative(out[ok])
        entry.update(outside=int(np.sum(ok & ~inside)),
                     negative=int(np.sum(negative)), failed=int(np.sum(~ok)))
        summary.append(entry)
        for i in range(len(out)):
            rows.append([k, fmt(src_xy[i, 0]), fmt(src_xy[i, 1]),
                         fmt(dst_xy[i, 0]), fmt(dst_xy[i, 1]),
                         int(inside[i]) if ok[i] else "",
                         int(negative[i]) if ok[i] else ""])

    doc = {"method": args.method, "y_slice": args.y_slice,
           "fraction": args.fraction, "count": args.count,
           "samples": args.samples, "src_wp": src_wp.tolist(),
           "sweeps": summary,
           "total_outside": sum(e["outside"] for e in summary),
           "total_negative": sum(e["negative"] for e in summary),
           "total_failed": sum(e["failed"] for e in summary),
           "meta": _meta(args)}
    if args.format == "json":
        _emit(args, json.dumps(doc, indent=2) + "\n")
    else:
        _emit(args, _csv_text(SWEEP_HEADER, rows))
        _emit_sidecar(args, doc)
    return EXIT_OK


# -------------------------------------------------------------------- locus

def cmd_locus(args):
    cmf = _cmf(args)
    poly = gamut.locus_polygon(cmf)
    wl = WAVELENGTHS[poly.bands]
    if args.format == "json":
        doc = {"wavelength_nm": wl.tolist(), "xy": poly.vertices.tolist(),
               "meta": _meta(args)}
        _emit(args, json.dumps(doc, indent=2) + "\n")
    else:
        _emit(args, _csv_text(["wavelength_nm", "x", "y"],
                              [[int(w), fmt(x), fmt(y)]
                               for w, (x, y) in zip(wl, poly.vertices)]))
    return EXIT_OK


# ------------------------------------------------------------------- parser

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cmf", default="builtin",
                        help="CMF CSV path, or 'builtin' (CIE 1931 2 deg)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--scale", choices=("auto", "0-1", "0-100"),
                        default="auto",
                        help="tristimulus scale; auto treats Y > 2 as 0-100")

    parser = argparse.ArgumentParser(
        prog="spectral-cat",
        description="Chromatic adaptation by spectral reconstruction.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("transform", parents=[common],
                       help="predict corresponding colors")
    p.add_argument("--method", choices=METHODS, default="spectral")
    p.add_argument("--src-wp", required=True,
                   help="source white: A, C, D65, EE or X,Y,Z")
    p.add_argument("--dst-wp", required=True, help="destination white")
    p.add_argument("--d", type=float, default=1.0,
                   help="degree of adaptation in [0, 1]")
    p.add_argument("--xyz", type=_xyz_arg, help="single source color X,Y,Z")
    p.add_argument("--input", help="CSV with columns [id,]X,Y,Z")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("reconstruct", parents=[common],
                       help="reconstruct a spectrum from XYZ")
    p.add_argument("--xyz", type=_xyz_arg, required=True)
    p.add_argument("--illuminant-wp", help="referencing illuminant white point")
    p.add_argument("--illuminant-file", help="referencing illuminant spectrum CSV")
    p.add_argument("--unweighted", action="store_true",
                   help="reference the raw CMFs (reconstructs an illuminant)")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("eval", parents=[common],
                       help="evaluate CATs on corresponding-color datasets")
    p.add_argument("--data", required=True, help="directory of dataset CSVs")
    p.add_argument("--methods", default="hpe,cat02,cat16,spectral")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("gamut-sweep", parents=[common],
                       help="optimum-slice sweep toward the locus")
    p.add_argument("--method", choices=METHODS, default="spectral-sym")
    p.add_argument("--y-slice", type=float, default=0.3)
    p.add_argument("--fraction", type=float, default=0.9)
    p.add_argument("--count", type=int, default=9)
    p.add_argument("--samples", type=int, default=360,
                   help="optimum-slice boundary points")
    p.add_argument("--src-wp", default="EE", help="source white (sweep center)")
    p.set_defaults(func=cmd_gamut_sweep)

    p = sub.add_parser("locus", parents=[common],
                       help="dump the spectral-locus polygon")
    p.set_defaults(func=cmd_locus)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    try:
        return args.func(args)
    except ConfigError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SpectralCatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
