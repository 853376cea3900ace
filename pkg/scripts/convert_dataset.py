"""Convert a corresponding-color table into the evaluation schema.

The archived corresponding-color sets circulate as whitespace- or
comma-separated tables with one sample per line. Name the columns with
--columns using any of: id, Xs Ys Zs Xd Yd Zd (tristimulus) or
xs ys Ys xd yd Yd (chromaticity plus luminance); use "-" to skip a column.

    python3 scripts/convert_dataset.py lamrigg.txt out/LamRigg \\
        --name LamRigg --scale 0-100 \\
        --src-wp 109.85,100,35.58 --dst-wp 95.05,100,108.88 \\
        --columns id,Xs,Ys,Zs,Xd,Yd,Zd \\
        --provenance "web.archive.org snapshot of the Luo-Rhodes catweb tables"

writes out/LamRigg.csv and out/LamRigg.json. Lines starting with # and
lines that do not parse as numbers (headers) are skipped.
"""
import argparse
import csv
import json
import re
import sys
from pathlib import Path

XYZ_COLS = ("Xs", "Ys", "Zs", "Xd", "Yd", "Zd")
XYY_COLS = ("xs", "ys", "Ys", "xd", "yd", "Yd")


def _triple(text):
    vals = [float(v) for v in text.split(",")]
    if len(vals) != 3:
        raise argparse.ArgumentTypeError("expected X,Y,Z")
    return vals


def _lift(x, y, Y):
    if y == 0:
        raise ValueError("chromaticity y = 0")
    return [x * Y / y, Y, (1 - x - y) * Y / y]


def convert_rows(lines, columns):
    cols = [c.strip() for c in columns.split(",")]
    unknown = set(cols) - set(XYZ_COLS) - set(XYY_COLS) - {"id", "-"}
    if unknown:
        raise ValueError(f"unknown columns {sorted(unknown)}")
    xyz = set(XYZ_COLS) <= set(cols)
    xyy = set(XYY_COLS) <= set(cols)
    if xyz == xyy:
        raise ValueError("columns must name either Xs..Zd or xs,ys,Ys,xd,yd,Yd")
    out = []
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        fields = [f for f in re.split(r"[,\s;]+", line) if f]
        if len(fields) < len(cols):
            continue
        rec = dict(zip(cols, fields))
        try:
            num = {k: float(v) for k, v in rec.items() if k not in ("id", "-")}
        except ValueError:
            continue  # header or note line
        sid = rec.get("id", str(len(out) + 1))
        if xyz:
            vals = [num[k] for k in XYZ_COLS]
        else:
            vals = (_lift(num["xs"], num["ys"], num["Ys"])
                    + _lift(num["xd"], num["yd"], num["Yd"]))
        out.append([sid] + vals)
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(
        description="Convert a corresponding-color table to CSV + JSON sidecar.")
    ap.add_argument("input")
    ap.add_argument("output_stem", help="output path without extension")
    ap.add_argument("--name", required=True)
    ap.add_argument("--scale", choices=("0-1", "0-100"), required=True)
    ap.add_argument("--src-wp", type=_triple, required=True)
    ap.add_argument("--dst-wp", type=_triple, required=True)
    ap.add_argument("--columns", default="id,Xs,Ys,Zs,Xd,Yd,Zd")
    ap.add_argument("--provenance", required=True,
                    help="where the table came from (URL, sub-table, notes)")
    args = ap.parse_args(argv)

    try:
        rows = convert_rows(Path(args.input).read_text().splitlines(), args.columns)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if not rows:
        print("error: no sample rows found", file=sys.stderr)
        return 1
    stem = Path(args.output_stem)
    stem.parent.mkdir(parents=True, exist_ok=True)
    with open(stem.with_suffix(".csv"), "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["sample_id", *XYZ_COLS])
        for sid, *vals in rows:
            w.writerow([sid] + [repr(v) for v in vals])
    stem.with_suffix(".json").write_text(json.dumps({
        "name": args.name, "scale": args.scale, "src_wp": args.src_wp,
        "dst_wp": args.dst_wp, "source_provenance": args.provenance,
    }, indent=2) + "\n")
    print(f"wrote {len(rows)} samples to {stem.with_suffix('.csv')}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
