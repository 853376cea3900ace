"""CSV readers and writers for spectra, CMF tables and tristimulus rows."""
import csv
import io

import numpy as np

from .errors import GridError, SchemaError
from .spectra import N_BANDS, WAVELENGTHS, check_spectrum

SPECTRUM_HEADER = ["wavelength_nm", "value"]
CMF_HEADER = ["wavelength_nm", "xbar", "ybar", "zbar"]


def fmt(value):
    """Six significant digits, fixed across platforms."""
    return f"{float(value):.6g}"


def _read_rows(path, header):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            got = [h.strip() for h in next(reader)]
        except StopIteration:
            raise SchemaError(f"{path}: empty file") from None
        if got != header:
            raise SchemaError(f"{path}: expected header {header}, got {got}")
        rows = [r for r in reader if r and any(c.strip() for c in r)]
    try:
        table = np.array([[float(c) for c in r] for r in rows], dtype=float)
    except ValueError as exc:
        raise SchemaError(f"{path}: {exc}") from None
    if table.ndim != 2 or table.shape != (N_BANDS, len(header)):
        raise GridError(f"{path}: expected {N_BANDS} rows of {len(header)} "
                        f"columns, got shape {table.shape}")
    if not np.array_equal(table[:, 0], WAVELENGTHS):
        raise GridError(f"{path}: wavelengths must be 380, 390, ..., 730")
    return table[:, 1:]


def read_spectrum(path):
    return check_spectrum(_read_rows(path, SPECTRUM_HEADER)[:, 0])


def read_cmf(path):
    cmf = _read_rows(path, CMF_HEADER)
    if np.any(cmf < 0):
        raise SchemaError(f"{path}: color-matching functions must be >= 0")
    return cmf


def spectrum_csv(values):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SPECTRUM_HEADER)
    for wl, v in zip(WAVELENGTHS, values):
        writer.writerow([int(wl), fmt(v)])
    return buf.getvalue()


def write_spectrum(path, values):
    with open(path, "w", newline="") as fh:
        fh.write(spectrum_csv(values))


def read_xyz_rows(path):
    """Read a batch tristimulus CSV with columns ``X,Y,Z`` (optional ``id``).

    Returns ``(ids, rows)`` where unparsable rows come back as ``None`` so
    the caller can annotate them instead of aborting the batch.
    """
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        fields = [f.strip() for f in (reader.fieldnames or [])]
        if not {"X", "Y", "Z"} <= set(fields):
            raise SchemaError(f"{path}: need columns X,Y,Z, got {fields}")
        reader.fieldnames = fields
        ids, rows = [], []
        for i, rec in enumerate(reader):
            ids.append((rec.get("id") or str(i)).strip())
            try:
                rows.append(np.array([float(rec[k]) for k in "XYZ"]))
            except (TypeError, ValueError):
                rows.append(None)
    return ids, rows
