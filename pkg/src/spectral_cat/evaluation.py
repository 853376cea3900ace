"""Corresponding-color datasets and the CIE94 evaluation harness.

A dataset is a CSV with header ``sample_id,Xs,Ys,Zs,Xd,Yd,Zd`` next to a
JSON sidecar of the same stem::

    {"name": "LamRigg", "scale": "0-100",
     "src_wp": [109.85, 100, 35.58], "dst_wp": [95.05, 100, 108.88],
     "source_provenance": "..."}
"""
import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import EmptyDataset, ScaleError, SchemaError, SpectralCatError
from .spectra import delta_e94, xyz_to_lab

CSV_HEADER = ["sample_id", "Xs", "Ys", "Zs", "Xd", "Yd", "Zd"]
SCALES = {"0-1": 1.0, "0-100": 100.0}
# tolerated deviation of a declared white's Y from 1 (0-1) or 100 (0-100)
WHITE_Y_RTOL = 0.2
CANONICAL_ORDER = ("CSAJ", "Helson", "LamRigg", "LUTCHI", "KuoLuo",
                   "Breneman", "BraunFairchild", "McCann")
EXCLUDED_FROM_NO_MCCANN = "mccann"


@dataclass(frozen=True)
class CorrespondingPair:
    sample_id: str
    src_xyz: np.ndarray
    dst_xyz: np.ndarray


@dataclass(frozen=True, eq=False)
class CorrespondingDataset:
    name: str
    src_wp: np.ndarray
    dst_wp: np.ndarray
    pairs: tuple
    provenance: str = ""

    @property
    def src(self):
        return np.array([p.src_xyz for p in self.pairs])

    @property
    def dst(self):
        return np.array([p.dst_xyz for p in self.pairs])


@dataclass
class EvalReport:
    per_dataset_mean: dict
    weighted_mean_all: float
    weighted_mean_no_mccann: float
    per_pair: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    counts: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "per_dataset_mean": self.per_dataset_mean,
            "counts": self.counts,
            "weighted_mean_all": self.weighted_mean_all,
            "weighted_mean_no_mccann": self.weighted_mean_no_mccann,
            "per_pair": [[sid, de] for sid, de in self.per_pair],
            "failures": [[sid, msg] for sid, msg in self.failures],
        }


def _white(meta, key, path):
    try:
        wp = np.array(meta[key], dtype=float)
    except (KeyError, TypeError, ValueError):
        raise SchemaError(f"{path}: sidecar needs numeric {key} [X, Y, Z]") from None
    if wp.shape != (3,):
        raise SchemaError(f"{path}: {key} must have 3 components")
    return wp


def load_dataset(source):
    """Load ``<stem>.csv`` and its ``<stem>.json`` sidecar.

    Values are brought to the 0-1 scale, then each side is divided by its
    white point's Y so both whites have Y = 1 exactly.
    """
    path = Path(source)
    if path.suffix != ".csv":
        path = path.with_suffix(".csv")
    sidecar = path.with_suffix(".json")
    try:
        meta = json.loads(sidecar.read_text())
    except FileNotFoundError:
        raise SchemaError(f"{path}: missing sidecar {sidecar.name}") from None
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{sidecar}: {exc}") from None
    scale = meta.get("scale")
    if scale not in SCALES:
        raise SchemaError(f"{sidecar}: scale must be one of {sorted(SCALES)}")
    factor = SCALES[scale]
    src_wp = _white(meta, "src_wp", sidecar) / factor
    dst_wp = _white(meta, "dst_wp", sidecar) / factor
    for label, wp in (("src_wp", src_wp), ("dst_wp", dst_wp)):
        if not abs(wp[1] - 1.0) <= WHITE_Y_RTOL:
            raise ScaleError(f"{sidecar}: {label} Y = {wp[1] * factor:g} does "
                             f"not fit declared scale {scale}")

    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = [h.strip() for h in next(reader, [])]
        if header != CSV_HEADER:
            raise SchemaError(f"{path}: expected header {CSV_HEADER}, got {header}")
        pairs = []
        for lineno, row in enumerate(reader, start=2):
            if not row or not any(c.strip() for c in row):
                continue
            if len(row) != len(CSV_HEADER):
                raise SchemaError(f"{path}:{lineno}: expected 7 fields")
            try:
                vals = np.array([float(c) for c in row[1:]]) / factor
            except ValueError as exc:
                raise SchemaError(f"{path}:{lineno}: {exc}") from None
            pairs.append(CorrespondingPair(row[0].strip(),
                                           vals[:3] / src_wp[1],
                                           vals[3:] / dst_wp[1]))
    if not pairs:
        raise EmptyDataset(f"{path}: no samples")
    return CorrespondingDataset(
        name=str(meta.get("name") or path.stem),
        src_wp=src_wp / src_wp[1], dst_wp=dst_wp / dst_wp[1],
        pairs=tuple(pairs), provenance=str(meta.get("source_provenance", "")))


def load_directory(directory):
    """Load every ``*.csv`` dataset under ``directory`` (sorted by name).

    Returns ``(datasets, errors)``; ``errors`` lists ``(path, message)`` for
    files that failed to load.
    """
    datasets, errors = [], []
    for path in sorted(Path(directory).glob("*.csv")):
        try:
            datasets.append((path.stem, load_dataset(path)))
        except (SpectralCatError, OSError) as exc:
            errors.append((str(path), str(exc)))
    return datasets, errors


def evaluate(cat, ds, prefix=""):
    """CIE94 differences between experimental and predicted destinations.

    ``cat`` maps one source XYZ to a predicted destination XYZ and may
    raise. Both colors are taken to Lab against the destination white; the
    experimental color is the CIE94 reference.

    Returns ``(results, failures)`` as lists of ``(sample_id, value)``.
    """
    results, failures = [], []
    for pair in ds.pairs:
        sid = f"{prefix}{pair.sample_id}"
        try:
            pred = np.asarray(cat(pair.src_xyz), dtype=float)
            if not np.all(np.isfinite(pred)):
                raise ValueError("non-finite prediction")
        except (SpectralCatError, ValueError, ArithmeticError) as exc:
            failures.append((sid, f"{type(exc).__name__}: {exc}"))
            continue
        de = delta_e94(xyz_to_lab(pair.dst_xyz, ds.dst_wp),
                       xyz_to_lab(pred, ds.dst_wp))
        results.append((sid, float(de)))
    return results, failures


def summarize(results, failures=None):
    """Build an :class:`EvalReport` from ``{dataset name: [(id, dE), ...]}``.

    Grand means weight every sample equally; the no-McCann mean drops the
    dataset named McCann (case-insensitive).
    """
    if not results:
        raise EmptyDataset("nothing to summarize")
    per_mean, counts, per_pair = {}, {}, []
    all_vals, no_mccann = [], []
    for name, rows in results.items():
        vals = [de for _, de in rows]
        counts[name] = len(vals)
        per_mean[name] = float(np.mean(vals)) if vals else float("nan")
        per_pair.extend(rows)
        all_vals.extend(vals)
        if name.lower() != EXCLUDED_FROM_NO_MCCANN:
            no_mccann.extend(vals)
    return EvalReport(
        per_dataset_mean=per_mean,
        weighted_mean_all=float(np.mean(all_vals)) if all_vals else float("nan"),
        weighted_mean_no_mccann=(float(np.mean(no_mccann)) if no_mccann
                                 else float("nan")),
        per_pair=per_pair, failures=list(failures or []), counts=counts)


def ordered_names(names):
    """Canonical dataset order first, then any others alphabetically."""
    names = list(dict.fromkeys(names))
    known = [n for n in CANONICAL_ORDER if n in names]
    return known + sorted(n for n in names if n not in CANONICAL_ORDER)
