"""Spectral-locus geometry and optimum (object-color-solid boundary) colors."""
from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleY
from .spectra import builtin_cmf, has_negative, weight_cmf, xyz_from_chromaticity

__all__ = [
    "LocusPolygon", "OptimumReflectance", "locus_polygon", "contains",
    "optimum_slice", "sweep_destinations", "ray_exit", "has_negative",
    "band_locus",
]

BOUNDARY_TOL = 1e-9
BAND_PASS = "band-pass"
BAND_STOP = "band-stop"


@dataclass(frozen=True, eq=False)
class LocusPolygon:
    """Spectral locus as a closed polygon.

    ``vertices`` holds monochromatic chromaticities in band order and
    ``bands`` their row indices in the CMF table; the closing edge from the
    last vertex back to the first is the purple line.
    """

    vertices: np.ndarray
    bands: np.ndarray

    def edges(self):
        a = self.vertices
        return a, np.roll(a, -1, axis=0)


def _hull_indices(pts):
    """Indices of the strict convex-hull vertices of ``pts`` (monotone chain)."""
    order = sorted(range(len(pts)), key=lambda i: (pts[i][0], pts[i][1]))

    def cross(o, a, b):
        return ((pts[a][0] - pts[o][0]) * (pts[b][1] - pts[o][1])
                - (pts[a][1] - pts[o][1]) * (pts[b][0] - pts[o][0]))

    def chain(idx):
        out = []
        for i in idx:
            while len(out) >= 2 and cross(out[-2], out[-1], i) <= 0:
                out.pop()
            out.append(i)
        return out

    lower, upper = chain(order), chain(order[::-1])
    return set(lower[:-1] + upper[:-1])


def locus_polygon(cmf=None):
    """Band-ordered locus polygon enclosing every positive mixture of bands.

    Bands whose chromaticity sits inside the convex hull of the others (the
    near-collinear long-wave end, where the tabulated polyline wiggles by
    ~1e-5) are left out, so the polygon is convex and positive spectra can
    never land outside it. Rows with X + Y + Z below 1e-9 are skipped.
    """
    cmf = builtin_cmf() if cmf is None else np.asarray(cmf, dtype=float)
    total = cmf.sum(axis=1)
    rows = np.flatnonzero(total >= 1e-9)
    xy = cmf[rows, :2] / total[rows, None]
    keep = sorted(_hull_indices(xy.tolist()))
    return LocusPolygon(xy[keep], rows[keep])


def band_locus(cmf=None):
    """Raw chromaticity of every CMF row, in band order (for plotting)."""
    cmf = builtin_cmf() if cmf is None else np.asarray(cmf, dtype=float)
    total = cmf.sum(axis=1)
    rows = np.flatnonzero(total >= 1e-9)
    return rows, cmf[rows, :2] / total[rows, None]


def _segment_distance(p, a, b):
    # p: (m, 2); a, b: (k, 2) -> (m, k)
    ab = b - a
    ap = p[:, None, :] - a[None]
    denom = np.einsum("kj,kj->k", ab, ab)
    t = np.clip(np.einsum("mkj,kj->mk", ap, ab) / np.where(denom > 0, denom, 1),
                0, 1)
    d = ap - t[..., None] * ab[None]
    return np.sqrt(np.einsum("mkj,mkj->mk", d, d))


def contains(poly, p, tol=BOUNDARY_TOL):
    """Even-odd point-in-polygon test; points within ``tol`` of an edge count
    as inside. ``p`` may be a single (x, y) or an (m, 2) array."""
    pts = np.asarray(p, dtype=float)
    single = pts.ndim == 1
    pts = np.atleast_2d(pts)
    a, b = poly.edges()
    px, py = pts[:, 0:1], pts[:, 1:2]
    ax, ay, bx, by = a[:, 0], a[:, 1], b[:, 0], b[:, 1]
    straddle = (ay > py) != (by > py)
    with np.errstate(divide="ignore", invalid="ignore"):
        x_cross = ax + (py - ay) * (bx - ax) / (by - ay)
    crossings = np.sum(straddle & (px < x_cross), axis=1)
    inside = (crossings % 2 == 1) | np.any(_segment_distance(pts, a, b) <= tol,
                                            axis=1)
    return bool(inside[0]) if single else inside


def ray_exit(poly, center, direction):
    """Distance along ``direction`` (unit) from ``center`` to the boundary."""
    a, b = poly.edges()
    c = np.asarray(center, dtype=float)
    d = np.asarray(direction, dtype=float)
    e = b - a
    # c + t d = a + s e  ->  [d, -e] [t, s]' = a - c
    det = -d[0] * e[:, 1] + d[1] * e[:, 0]
    rel = a - c
    with np.errstate(divide="ignore", invalid="ignore"):
        t = (-rel[:, 0] * e[:, 1] + rel[:, 1] * e[:, 0]) / det
        s = (d[0] * rel[:, 1] - d[1] * rel[:, 0]) / det
    hit = (det != 0) & (t > 0) & (s >= 0) & (s <= 1)
    if not hit.any():
        raise ValueError("ray does not meet the polygon; is center inside?")
    return float(np.min(t[hit]))


def sweep_destinations(center, fraction, count, poly):
    """White points (Y = 1) at ``fraction`` of the way from ``center`` to the
    locus, on ``count`` rays at equal angles counterclockwise from +x."""
    if not 0 <= fraction < 1:
        raise ValueError(f"fraction must be in [0, 1), got {fraction}")
    center = np.asarray(center, dtype=float)
    out = np.empty((count, 2))
    for k in range(count):
        theta = 2 * np.pi * k / count
        d = np.array([np.cos(theta), np.sin(theta)])
        out[k] = center + fraction * ray_exit(poly, center, d) * d
    return xyz_from_chromaticity(out, 1.0)


@dataclass(frozen=True)
class OptimumReflectance:
    """A two-transition 0/1 reflectance with fractional transition bands.

    Band-pass: 1 strictly between ``lo_band`` and ``hi_band``, 0 outside.
    Band-stop: 0 strictly between them, 1 outside. ``lo_frac``/``hi_frac``
    are the reflectance values of the two transition bands.
    """

    kind: str
    lo_band: int
    hi_band: int
    lo_frac: float
    hi_frac: float
    n: int = 36

    def reflectance(self):
        inner, outer = (1.0, 0.0) if self.kind == BAND_PASS else (0.0, 1.0)
        rho = np.full(self.n, outer)
        rho[self.lo_band + 1:self.hi_band] = inner
        rho[self.lo_band] = self.lo_frac
        rho[self.hi_band] = self.hi_frac
        return rho


def _cyclic_fill(start, length, n):
    """Band fill of the cyclic interval [start, start + length) on [0, n)."""
    lo = np.arange(n)
    s = start[:, None]
    e = (start + length)[:, None]
    fill = np.clip(np.minimum(e, lo + 1) - np.maximum(s, lo), 0, 1)
    fill += np.clip(np.minimum(e, lo + 1 + n) - np.maximum(s, lo + n), 0, 1)
    return np.minimum(fill, 1.0)


def _describe(fill, wraps):
    n = fill.size
    if wraps:
        idx = np.flatnonzero(fill < 1)
        kind = BAND_STOP
    else:
        idx = np.flatnonzero(fill > 0)
        kind = BAND_PASS
    lo, hi = int(idx[0]), int(idx[-1])
    return OptimumReflectance(kind, lo, hi, float(fill[lo]), float(fill[hi]), n)


def optimum_slice(W, cmf=None, Y_target=0.3, samples=360, *, tol=1e-12):
    """Optimum colors on the constant-luminance slice ``Y = Y_target``.

    The interval start is scanned over ``samples`` equally spaced positions
    on the cyclic wavelength axis; for each, the interval length is found by
    bisection so the W-referenced Y hits ``Y_target``.

    Returns a list of ``(OptimumReflectance, xyz)`` pairs, ``xyz`` computed
    from the realized reflectance.
    """
    A_W = weight_cmf(W, cmf)
    n = A_W.shape[0]
    y_total = A_W[:, 1].sum()
    if not 0 < Y_target <= y_total + 1e-12:
        raise InfeasibleY(f"Y = {Y_target} is outside (0, {y_total:.6g}]")
    starts = n * np.arange(samples) / samples
    if Y_target >= y_total:
        length = np.full(samples, float(n))
    else:
        lo = np.zeros(samples)
        hi = np.full(samples, float(n))
        # Y(length) is strictly increasing because ybar * W > 0 on every band
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            y = _cyclic_fill(starts, mid, n) @ A_W[:, 1]
            below = y < Y_target
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
            if np.max(hi - lo) < tol:
                break
        length = 0.5 * (lo + hi)
    fills = _cyclic_fill(starts, length, n)
    out = []
    for s, L, fill in zip(starts, length, fills):
        if L >= n:
            desc = OptimumReflectance(BAND_STOP, 0, 0, 1.0, 1.0, n)
        else:
            desc = _describe(fill, s + L > n)
        out.append((desc, desc.reflectance() @ A_W))
    return out
