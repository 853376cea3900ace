"""Exception types raised across the package."""


class SpectralCatError(Exception):
    """Base class for all package errors."""


class ZeroLuminance(SpectralCatError):
    """An illuminant has no luminance to normalize by."""


class DegenerateSum(SpectralCatError):
    """Chromaticity requested for a stimulus with X + Y + Z == 0."""


class InvalidWhite(SpectralCatError):
    """A reference white has a non-positive component."""


class GridError(SpectralCatError, ValueError):
    """Spectral data is not on the 380-730 nm, 10 nm grid."""


class InvalidSize(SpectralCatError, ValueError):
    pass


class InvalidD(SpectralCatError, ValueError):
    """Degree of adaptation outside [0, 1]."""


class NoConvergence(SpectralCatError):
    """Newton iteration hit its cap (or blew up) before |F| < tol.

    Attributes
    ----------
    residual_norm : float
        max |F| at the last evaluated iterate.
    iterations : int
        Number of Newton steps taken.
    """

    def __init__(self, residual_norm, iterations, message=None):
        self.residual_norm = float(residual_norm)
        self.iterations = int(iterations)
        if message is None:
            message = (f"no convergence after {self.iterations} iterations "
                       f"(max|F| = {self.residual_norm:.3e})")
        super().__init__(message)


class SingularSystem(SpectralCatError):
    """The Newton linear system could not be factored."""


class DegenerateLuminance(SpectralCatError):
    pass


class DegenerateCone(SpectralCatError):
    """A source white has a non-positive cone response."""


class InfeasibleY(SpectralCatError, ValueError):
    pass


class SchemaError(SpectralCatError, ValueError):
    pass


class ScaleError(SpectralCatError, ValueError):
    pass


class EmptyDataset(SpectralCatError, ValueError):
    pass
