"""Linear von Kries chromatic adaptation in (sharpened) cone spaces."""
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateCone, InvalidD

# Hunt-Pointer-Estevez, equal-energy normalized (Hunt 1991; the form used
# inside CIECAM02, CIE 159:2004).
M_HPE = (
    (0.38971, 0.68898, -0.07868),
    (-0.22981, 1.18340, 0.04641),
    (0.00000, 0.00000, 1.00000),
)
# CIE 159:2004, CIECAM02 chromatic adaptation matrix.
M_CAT02 = (
    (0.7328, 0.4296, -0.1624),
    (-0.7036, 1.6975, 0.0061),
    (0.0030, 0.0136, 0.9834),
)
# Li et al., Color Res. Appl. 42 (2017) 703-718, CAT16.
M_CAT16 = (
    (0.401288, 0.650173, -0.051461),
    (-0.250268, 1.204414, 0.045854),
    (-0.002079, 0.048952, 0.953127),
)


@dataclass(frozen=True, eq=False)
class LinearCatSpec:
    name: str
    M: np.ndarray
    M_inv: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        M = np.array(self.M, dtype=float)
        if M.shape != (3, 3):
            raise ValueError(f"{self.name}: cone matrix must be 3x3")
        if not np.isfinite(np.linalg.cond(M)) or np.linalg.cond(M) > 1e12:
            raise ValueError(f"{self.name}: cone matrix is not invertible")
        M.flags.writeable = False
        inv = np.linalg.inv(M)
        inv.flags.writeable = False
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "M_inv", inv)


def builtin_specs():
    return [LinearCatSpec("hpe", M_HPE), LinearCatSpec("cat02", M_CAT02),
            LinearCatSpec("cat16", M_CAT16)]


def spec_by_name(name):
    for spec in builtin_specs():
        if spec.name == name.lower():
            return spec
    raise KeyError(f"no linear CAT named {name!r}")


def adaptation_gains(spec, src_wp, dst_wp, D=1.0):
    """Diagonal of ``D * Lambda + (1 - D) * I`` in cone space."""
    D = float(D)
    if not 0.0 <= D <= 1.0:
        raise InvalidD(f"degree of adaptation must lie in [0, 1], got {D}")
    lms_s = spec.M @ np.asarray(src_wp, dtype=float)
    lms_d = spec.M @ np.asarray(dst_wp, dtype=float)
    if np.any(lms_s <= 0):
        raise DegenerateCone(
            f"{spec.name}: source white has cone response {lms_s}")
    return D * (lms_d / lms_s) + (1 - D)


def linear_cat_transform(spec, src_wp, dst_wp, D, src):
    """``M^-1 diag(gains) M src``; broadcasts over rows of ``src``.

    Negative results are returned unchanged.
    """
    gains = adaptation_gains(spec, src_wp, dst_wp, D)
    src = np.asarray(src, dtype=float)
    if np.all(gains == 1.0):
        return src.copy()
    return (src @ spec.M.T) * gains @ spec.M_inv.T
