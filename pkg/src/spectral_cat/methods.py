"""Uniform access to every CAT by name."""
import numpy as np

from . import cat, vonkries

METHODS = ("spectral", "spectral-sym", "hpe", "cat02", "cat16")


class Transform:
    """A CAT bound to one illuminant pair.

    Call with a single XYZ (raises on failure) or use :meth:`batch` for an
    (m, 3) array (returns ``(xyz, ok)``).
    """

    def __init__(self, method, src_wp, dst_wp, D=1.0, cmf=None):
        if method not in METHODS:
            raise ValueError(f"unknown method {method!r}; choose from {METHODS}")
        self.method = method
        self.D = float(D)
        if method.startswith("spectral"):
            variant = cat.SYMMETRIC if method == "spectral-sym" else cat.ORIGINAL
            self.ctx = cat.prepare_context(src_wp, dst_wp, D, variant, cmf=cmf,
                                           scale="0-1")
            self.src_wp, self.dst_wp = self.ctx.src_wp, self.ctx.dst_wp
        else:
            self.ctx = None
            self.spec = vonkries.spec_by_name(method)
            self.src_wp = np.asarray(src_wp, dtype=float)
            self.dst_wp = np.asarray(dst_wp, dtype=float)
            # validates D and the source cone responses up front
            vonkries.adaptation_gains(self.spec, self.src_wp, self.dst_wp, D)

    def __call__(self, xyz):
        if self.ctx is not None:
            return cat.transform(self.ctx, xyz)
        return vonkries.linear_cat_transform(self.spec, self.src_wp,
                                             self.dst_wp, self.D, xyz)

    def batch(self, xyz):
        xyz = np.atleast_2d(np.asarray(xyz, dtype=float))
        if self.ctx is not None:
            return cat.transform_many(self.ctx, xyz)
        out = vonkries.linear_cat_transform(self.spec, self.src_wp,
                                            self.dst_wp, self.D, xyz)
        return out, np.all(np.isfinite(out), axis=1)
