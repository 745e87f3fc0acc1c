"""Exception types shared across the package."""


class KernelTVError(Exception):
    """Base class for all package-specific errors."""


class GridMismatch(KernelTVError, ValueError):
    """Two fields (or a field and a kernel) live on different grids."""


class DegenerateFidelity(KernelTVError):
    """The smoothed residual K*(f-u) is numerically zero, so the dual
    field of the fidelity term is undefined."""


class NonzeroMean(KernelTVError):
    """The G-norm is requested for a field whose mean is not negligible;
    on the torus such a field has no divergence representation."""


class NonConvergence(KernelTVError):
    """An iterative routine exhausted its budget without meeting its
    certified tolerance."""


class BadBracket(KernelTVError):
    """A bisection bracket does not straddle the decision boundary."""


class EmptyMask(KernelTVError):
    """The smooth-region mask for the curvature residual holds less than
    1% of the cells."""


class NoContour(KernelTVError):
    """Marching squares found no level contour to analyse."""


class OdeBlowup(KernelTVError):
    """A level-curve integration left the graph regime (|y'| too large)."""


class GeometryError(KernelTVError, ValueError):
    """A synthesized shape does not fit the requested grid."""
