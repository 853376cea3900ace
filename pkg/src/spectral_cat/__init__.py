"""Chromatic adaptation by minimum log-slope spectral reconstruction.

The main entry points are :func:`prepare_context` / :func:`transform` for
the spectral CAT, :func:`reconstruct` for the underlying solver and
:func:`linear_cat_transform` for the von Kries baselines.
"""
__version__ = "0.1.0"

from ._backend import NAME as backend
from .cat import (ORIGINAL, SYMMETRIC, SpectralCatContext, prepare_context,
                  reconstruct_illuminant, round_trip, transform, transform_many)
from .errors import (DegenerateCone, DegenerateLuminance, DegenerateSum,
                     EmptyDataset, GridError, InfeasibleY, InvalidD,
                     InvalidSize, InvalidWhite, NoConvergence, ScaleError,
                     SchemaError, SingularSystem, SpectralCatError,
                     ZeroLuminance)
from .methods import METHODS, Transform
from .recon import (ReconResult, build_diff_matrix, build_dual_cmf,
                    reconstruct, reconstruct_many, reconstruct_symmetric)
from .spectra import (WHITE_POINTS, Illuminant, builtin_cmf, chromaticity,
                      delta_e94, has_negative, normalize_illuminant,
                      tristimulus, weight_cmf, white_point, xyz_to_lab)
from .vonkries import LinearCatSpec, builtin_specs, linear_cat_transform
