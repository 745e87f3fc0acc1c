"""Cartoon-texture decomposition with kernel-smoothed fidelity.

The library minimizes TV(u) + lam*||K*(f-u)||_p^q on a periodic grid
and verifies the structure of the minimizers: star-norm optimality
certificates, radial step profiles, layer-cake fixed points, contour
curvature bounds, and kernel-scale thresholds.
"""

from .energy import ProblemParams, compute_dual_field, energy, minimality_probe
from .gnorm import StarNormResult, star_norm
from .grid import (GridSpec, ScalarField, VectorField, bv_seminorm, divergence,
                   gradient, inner, lp_norm, threshold)
from .kernels import (GAUSSIAN, IDENTITY, POISSON, KernelSpec, SpectralKernel,
                      build_multiplier, convolve, get_kernel, l1_smoothing_curve)
from .optimality import (CurvatureResidual, OptimalityReport,
                         curvature_residual, verify_optimality)
from .solver import SolveResult, SolverConfig, solve

__version__ = "0.1.0"

__all__ = [
    "GridSpec", "ScalarField", "VectorField",
    "gradient", "divergence", "bv_seminorm", "lp_norm", "threshold", "inner",
    "KernelSpec", "SpectralKernel", "build_multiplier", "get_kernel",
    "convolve", "l1_smoothing_curve", "GAUSSIAN", "POISSON", "IDENTITY",
    "ProblemParams", "energy", "compute_dual_field", "minimality_probe",
    "SolverConfig", "SolveResult", "solve",
    "star_norm", "StarNormResult",
    "OptimalityReport", "verify_optimality",
    "CurvatureResidual", "curvature_residual",
    "__version__",
]
