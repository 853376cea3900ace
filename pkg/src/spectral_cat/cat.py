"""Chromatic adaptation by spectral reconstruction.

Both white points are turned into smooth positive illuminant spectra, the
source color into a smooth positive reflectance under the source
illuminant; that reflectance is re-lit by the destination illuminant and
the result rescaled to the source luminance.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateLuminance, InvalidD
from .recon import (build_diff_matrix, build_dual_cmf, reconstruct,
                    reconstruct_many, reconstruct_symmetric)
from .spectra import Illuminant, builtin_cmf, normalize_illuminant, weight_cmf

ORIGINAL = "original"
SYMMETRIC = "symmetric"
VARIANTS = (ORIGINAL, SYMMETRIC)

# Y above this is taken to mean the 0-100 convention
AUTO_SCALE_Y = 2.0


def to_unit_scale(xyz, scale="auto"):
    """Convert tristimulus values to the 0-1 convention.

    ``scale`` is ``"auto"`` (divide by 100 when Y > 2), ``"0-1"`` or
    ``"0-100"``.
    """
    xyz = np.asarray(xyz, dtype=float)
    if scale == "0-100" or (scale == "auto" and np.any(xyz[..., 1] > AUTO_SCALE_Y)):
        return xyz / 100.0
    if scale not in ("auto", "0-1"):
        raise ValueError(f"unknown scale {scale!r}")
    return xyz


def _unit_white(wp, scale):
    wp = to_unit_scale(wp, scale)
    if wp.shape != (3,) or not np.all(np.isfinite(wp)) or not wp[1] > 0:
        raise ValueError(f"white point needs finite X,Y,Z with Y > 0, got {wp}")
    return wp / wp[1]


def reconstruct_illuminant(wp, cmf=None, C=None):
    """Smooth positive illuminant spectrum with white point ``wp`` (Y = 1)."""
    cmf = builtin_cmf() if cmf is None else cmf
    res = reconstruct(cmf, C, wp)
    return normalize_illuminant(res.rho, cmf)


@dataclass(frozen=True, eq=False)
class SpectralCatContext:
    """Per illuminant-pair state; build with :func:`prepare_context`."""

    src_wp: np.ndarray
    dst_wp: np.ndarray
    W_S: Illuminant
    W_D: Illuminant
    W_D_effective: Illuminant
    A_S: np.ndarray
    A_D: np.ndarray
    A_SD: np.ndarray
    C: np.ndarray
    D: float
    variant: str

    @property
    def identity(self):
        """True when source and effective destination illuminants coincide."""
        return np.array_equal(self.W_S.values, self.W_D_effective.values)


def prepare_context(src_wp, dst_wp, D=1.0, variant=ORIGINAL, *, cmf=None,
                    scale="auto"):
    """Reconstruct both illuminants and precompute the weighted CMFs.

    ``D`` blends the destination illuminant toward the source one
    (``W_D_eff = D W_D + (1 - D) W_S``) before any CMF weighting, so the
    symmetric variant's dual-referenced CMFs also see the adapted
    destination.
    """
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    D = float(D)
    if not 0.0 <= D <= 1.0:
        raise InvalidD(f"degree of adaptation must lie in [0, 1], got {D}")
    cmf = builtin_cmf() if cmf is None else np.asarray(cmf, dtype=float)
    C = build_diff_matrix(cmf.shape[0])
    src_wp = _unit_white(src_wp, scale)
    dst_wp = _unit_white(dst_wp, scale)

    W_S = reconstruct_illuminant(src_wp, cmf, C)
    if np.array_equal(src_wp, dst_wp):
        W_D = W_S
    else:
        W_D = reconstruct_illuminant(dst_wp, cmf, C)
    if D == 1.0:
        W_eff = W_D
    elif D == 0.0 or W_D is W_S:
        W_eff = W_S
    else:
        W_eff = Illuminant(D * W_D.values + (1 - D) * W_S.values,
                           normalized=True)
    return SpectralCatContext(
        src_wp=src_wp, dst_wp=dst_wp, W_S=W_S, W_D=W_D, W_D_effective=W_eff,
        A_S=weight_cmf(W_S, cmf), A_D=weight_cmf(W_eff, cmf),
        A_SD=build_dual_cmf(W_S, W_eff, cmf), C=C, D=D, variant=variant)


def source_reflectance(ctx, src):
    """The reconstructed reflectance of ``src`` under the source illuminant."""
    if ctx.variant == SYMMETRIC:
        return reconstruct_symmetric(ctx.A_S, ctx.A_SD, ctx.C, src)
    return reconstruct(ctx.A_S, ctx.C, src)


def _relight(ctx, rho, src_y):
    xyz_d = rho @ ctx.A_D
    y = xyz_d[..., 1:2]
    if np.any(y <= 1e-12):
        raise DegenerateLuminance("destination luminance vanished")
    out = xyz_d * (src_y / y)
    out[..., 1:2] = src_y  # exact, not y * (src_y / y)
    return out


def transform(ctx, src):
    """Predict the destination color corresponding to ``src``.

    Output chromaticity is that of the re-lit reflectance; output Y equals
    ``src[1]``.
    """
    src = np.asarray(src, dtype=float)
    if not src[1] > 0:
        raise DegenerateLuminance(f"source Y must be positive, got {src[1]}")
    if ctx.identity:
        return src.copy()
    rho = source_reflectance(ctx, src).rho
    return _relight(ctx, rho, src[1:2])


def transform_many(ctx, src):
    """Batch :func:`transform`; returns ``(xyz, ok)``.

    Rows that fail (non-positive Y, no convergence) come back as NaN with
    ``ok`` False.
    """
    src = np.atleast_2d(np.asarray(src, dtype=float))
    out = np.full_like(src, np.nan)
    good = src[:, 1] > 0
    if ctx.identity:
        out[good] = src[good]
        return out, good
    grad = ctx.A_SD if ctx.variant == SYMMETRIC else ctx.A_S
    rho, _, _, ok = reconstruct_many(ctx.A_S, ctx.C, src[good], A_grad=grad)
    idx = np.flatnonzero(good)
    good[idx[~ok]] = False
    if ok.any():
        xyz_d = rho[ok] @ ctx.A_D
        y = xyz_d[:, 1:2]
        fine = (y > 1e-12).ravel()
        sel = idx[ok]
        out[sel[fine]] = xyz_d[fine] * (src[sel[fine], 1:2] / y[fine])
        out[sel[fine], 1] = src[sel[fine], 1]
        good[sel[~fine]] = False
    return out, good


def round_trip(ctx_ab, ctx_ba, src):
    """Transform ``src`` A -> B and back B -> A."""
    return transform(ctx_ba, transform(ctx_ab, src))
