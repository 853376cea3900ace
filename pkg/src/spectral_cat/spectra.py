"""Colorimetric primitives on the 36-band, 380-730 nm grid.

Spectra are plain 1-D numpy arrays of length 36; tristimulus values, Lab
colors and chromaticities are arrays whose last axis has length 3 (or 2),
so most functions here broadcast over leading batch axes.

All tristimulus values use the 0-1 convention: a perfect reflector under a
normalized illuminant has Y = 1.
"""
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

import numpy as np

from .errors import DegenerateSum, GridError, InvalidWhite, ZeroLuminance

N_BANDS = 36
WAVELENGTHS = np.arange(380, 731, 10)

# CIE 94 graphic-arts weights
K1 = 0.045
K2 = 0.015

# CIE L*a*b* branch constants (exact rational forms)
_LAB_EPSILON = 216 / 24389
_LAB_KAPPA = 24389 / 27

# Standard white points, 2 degree observer, Y = 1.
# A, C, D65: ASTM E308-01 Table 5 (tabulated XYZ / 100); EE: equal energy.
WHITE_POINTS = {
    "A": (1.09850, 1.0, 0.35585),
    "C": (0.98074, 1.0, 1.18232),
    "D65": (0.95047, 1.0, 1.08883),
    "EE": (1.0, 1.0, 1.0),
}


@dataclass(frozen=True, eq=False)
class Illuminant:
    """Relative spectral power on the 36-band grid.

    ``normalized`` is True when ``ybar' @ values == 1``.
    """

    values: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        values = check_spectrum(self.values)
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def diag(self):
        return np.diag(self.values)


def check_spectrum(values):
    """Return ``values`` as a float array, validating the 36-band grid."""
    arr = np.array(values, dtype=float)
    if arr.shape != (N_BANDS,):
        raise GridError(f"expected {N_BANDS} samples, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise GridError("spectrum has non-finite samples")
    return arr


@lru_cache(maxsize=None)
def _load_builtin():
    text = resources.files(__package__).joinpath(
        "data/cie1931_2deg_380_730_10nm.csv").read_text()
    table = np.loadtxt(text.splitlines(), delimiter=",", skiprows=1)
    if not np.array_equal(table[:, 0], WAVELENGTHS):
        raise GridError("bundled CMF table is not on the 380-730/10 nm grid")
    cmf = np.ascontiguousarray(table[:, 1:])
    cmf.flags.writeable = False
    return cmf


def builtin_cmf():
    """CIE 1931 2 degree observer, 380-730 nm at 10 nm, as a (36, 3) array.

    The returned array is read-only and shared.
    """
    return _load_builtin()


def _cmf(cmf):
    return builtin_cmf() if cmf is None else np.asarray(cmf, dtype=float)


def normalize_illuminant(raw, cmf=None):
    """Scale ``raw`` so that its luminance ``ybar' @ W`` equals 1."""
    values = check_spectrum(raw)
    lum = _cmf(cmf)[:, 1] @ values
    if not lum > 0:
        raise ZeroLuminance(f"ybar' @ W = {lum!r}; cannot normalize")
    return Illuminant(values / lum, normalized=True)


def weight_cmf(illum, cmf=None):
    """Illuminant-referenced CMFs: row i of ``cmf`` scaled by ``W[i]``."""
    if not illum.normalized:
        raise ValueError("weight_cmf requires a normalized illuminant")
    return illum.values[:, None] * _cmf(cmf)


def tristimulus(rho, weighted):
    """XYZ of reflectance ``rho`` (shape (..., 36)) under weighted CMFs."""
    return np.asarray(rho, dtype=float) @ np.asarray(weighted, dtype=float)


def white_point(illum, cmf=None):
    return weight_cmf(illum, cmf).sum(axis=0)


def chromaticity(xyz):
    """(x, y) chromaticity of ``xyz``; broadcasts over leading axes."""
    xyz = np.asarray(xyz, dtype=float)
    total = xyz.sum(axis=-1, keepdims=True)
    if np.any(total == 0):
        raise DegenerateSum("chromaticity undefined for X + Y + Z == 0")
    return xyz[..., :2] / total


def xyz_from_chromaticity(xy, Y=1.0):
    """Lift chromaticity ``xy`` to tristimulus with luminance ``Y``."""
    xy = np.asarray(xy, dtype=float)
    x, y = xy[..., 0], xy[..., 1]
    Y = np.broadcast_to(np.asarray(Y, dtype=float), x.shape)
    return np.stack([x * Y / y, Y, (1 - x - y) * Y / y], axis=-1)


def _lab_f(t):
    return np.where(t > _LAB_EPSILON, np.cbrt(t), (_LAB_KAPPA * t + 16) / 116)


def xyz_to_lab(xyz, white):
    """CIE 1976 L*a*b* of ``xyz`` relative to the reference ``white``."""
    white = np.asarray(white, dtype=float)
    if np.any(white <= 0):
        raise InvalidWhite(f"reference white must be positive, got {white}")
    f = _lab_f(np.asarray(xyz, dtype=float) / white)
    fx, fy, fz = f[..., 0], f[..., 1], f[..., 2]
    return np.stack([116 * fy - 16, 500 * (fx - fy), 200 * (fy - fz)], axis=-1)


def delta_e94(reference, sample):
    """CIE 1994 color difference, graphic-arts weights (kL = kC = kH = 1).

    The chroma of ``reference`` sets the S_C and S_H weights, so the
    formula is not symmetric in its arguments.
    """
    ref = np.asarray(reference, dtype=float)
    smp = np.asarray(sample, dtype=float)
    c1 = np.hypot(ref[..., 1], ref[..., 2])
    c2 = np.hypot(smp[..., 1], smp[..., 2])
    dl = ref[..., 0] - smp[..., 0]
    dc = c1 - c2
    da = ref[..., 1] - smp[..., 1]
    db = ref[..., 2] - smp[..., 2]
    # dH^2 can dip a hair below zero from cancellation
    dh2 = np.maximum(da * da + db * db - dc * dc, 0.0)
    sc = 1 + K1 * c1
    sh = 1 + K2 * c1
    return np.sqrt(dl * dl + (dc / sc) ** 2 + dh2 / sh ** 2)


def has_negative(xyz):
    """True where any tristimulus component is strictly negative."""
    return np.any(np.asarray(xyz) < 0, axis=-1)


def resolve_white(spec):
    """Parse a white point given as a preset name or ``"X,Y,Z"`` text."""
    if isinstance(spec, str):
        key = spec.strip()
        if key.upper() in WHITE_POINTS:
            return np.array(WHITE_POINTS[key.upper()])
        try:
            parts = [float(p) for p in key.split(",")]
        except ValueError:
            raise ValueError(f"unknown white point {spec!r}; use one of "
                             f"{sorted(WHITE_POINTS)} or X,Y,Z") from None
    else:
        parts = list(spec)
    if len(parts) != 3:
        raise ValueError(f"white point needs 3 components, got {spec!r}")
    return np.array(parts, dtype=float)
