"""The decomposition energy and the dual field of its fidelity term.

The objective splits an image f into cartoon u and texture v = f - u by
minimizing, over u,

    E(u) = TV(u) + lam * || K*(f - u) ||_p ^ q

with p, q in {1, 2}.  Writing F = K*(f-u), the fidelity term has the
pointwise dual field

    J = q * F * |F|^(p-2) / ||F||_p^(p-q),

which is the (formal) derivative of ||F||_p^q with respect to F.  The
four supported exponent pairs reduce to

    (1,1): J = sign(F)          (2,2): J = 2 F
    (2,1): J = F / ||F||_2      (1,2): J = 2 sign(F) ||F||_1

with the convention sign(0) = 0 (the residual can round to zero on a
grid even though it is nonzero a.e. in the continuum).  The pairing
identity <F, J> = q ||F||_p^q holds for all four pairs and is used as a
self-check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateFidelity
from .grid import GridSpec, ScalarField, bv_seminorm, check_same_grid, lp_norm
from .kernels import KernelSpec, SpectralKernel, convolve, get_kernel

SUPPORTED_EXPONENTS = ((1, 1), (2, 2), (2, 1), (1, 2))


@dataclass(frozen=True)
class ProblemParams:
    """Exponents (p, q), fidelity weight lam, and the smoothing kernel."""

    p: int = 1
    q: int = 1
    lam: float = 1.0
    kernel: KernelSpec = KernelSpec()

    def __post_init__(self):
        if (self.p, self.q) not in SUPPORTED_EXPONENTS:
            raise ValueError(
                f"(p, q) must be one of {SUPPORTED_EXPONENTS}, got ({self.p}, {self.q})"
            )
        if not (np.isfinite(self.lam) and self.lam > 0):
            raise ValueError(f"lam must be finite and positive, got {self.lam}")


def epsilon_fidelity(grid: GridSpec) -> float:
    """Threshold below which ||F||_p counts as numerically zero."""
    return 1e-12 * grid.nx * grid.ny * grid.cell_area


def fidelity(residual_smoothed: ScalarField, params: ProblemParams) -> float:
    """lam * ||F||_p^q for an already-smoothed residual F."""
    return params.lam * lp_norm(residual_smoothed, params.p) ** params.q


def smoothed_residual(
    f: ScalarField, u: ScalarField, params: ProblemParams,
    kernel: SpectralKernel | None = None,
) -> ScalarField:
    """F = K*(f - u)."""
    check_same_grid(f, u)
    kern = kernel if kernel is not None else get_kernel(params.kernel, f.grid)
    return convolve(kern, ScalarField(f.grid, f.values - u.values))


def energy(
    f: ScalarField, u: ScalarField, params: ProblemParams,
    kernel: SpectralKernel | None = None,
) -> float:
    """TV(u) + lam * ||K*(f-u)||_p^q."""
    return bv_seminorm(u) + fidelity(smoothed_residual(f, u, params, kernel), params)


def dual_field_from_residual(F: ScalarField, params: ProblemParams) -> ScalarField:
    """The dual field J evaluated from F = K*(f-u)."""
    norm_p = lp_norm(F, params.p)
    if norm_p <= epsilon_fidelity(F.grid):
        raise DegenerateFidelity(
            f"||K*(f-u)||_{params.p} = {norm_p:.3e} is numerically zero"
        )
    p, q = params.p, params.q
    if p == 1:
        base = np.sign(F.values)
    else:
        base = F.values
    return ScalarField(F.grid, q * base / norm_p ** (p - q))


def compute_dual_field(
    f: ScalarField, u: ScalarField, params: ProblemParams,
    kernel: SpectralKernel | None = None,
) -> ScalarField:
    """J evaluated at the pair (f, u)."""
    return dual_field_from_residual(smoothed_residual(f, u, params, kernel), params)


def minimality_probe(
    f: ScalarField, u: ScalarField, params: ProblemParams,
    h: ScalarField, eps: float,
) -> float:
    """Energy increment E(u + eps*h) - E(u).

    At a minimizer the increment is nonnegative for every direction h
    and either sign of the step (probe with h and -h).
    """
    if not (0 < eps <= 0.1):
        raise ValueError(f"eps must lie in (0, 0.1], got {eps}")
    check_same_grid(u, h)
    perturbed = ScalarField(u.grid, u.values + eps * h.values)
    kern = get_kernel(params.kernel, f.grid)
    return energy(f, perturbed, params, kern) - energy(f, u, params, kern)
