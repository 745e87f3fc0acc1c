"""Spectral convolution kernels on the periodic grid.

Kernels are realized by sampling their continuum Fourier multipliers at
the torus frequencies xi = (k/(nx*h), l/(ny*h)):

    gaussian:  exp(-pi * t * |xi|^2)
    poisson:   exp(-pi * t * |xi|)
    identity:  1

Realizing the multiplier (rather than sampling the kernel in space)
makes the semigroup identity K_s * K_t = K_{s+t} hold to round-off and
keeps the multiplier strictly positive, so u -> K*u is injective.
Convolution is exact periodic convolution via the real FFT.  t = 0
reduces the gaussian and poisson families to the identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from threading import Lock

import numpy as np
import scipy.fft

from .grid import GridSpec, ScalarField, check_same_grid

GAUSSIAN = "gaussian"
POISSON = "poisson"
IDENTITY = "identity"

_FAMILIES = (GAUSSIAN, POISSON, IDENTITY)

_ALIASES = {
    "gauss": GAUSSIAN,
    "gaussian": GAUSSIAN,
    "poisson": POISSON,
    "id": IDENTITY,
    "identity": IDENTITY,
}


def canonical_family(name: str) -> str:
    try:
        return _ALIASES[name.lower()]
    except KeyError:
        raise ValueError(f"unknown kernel family {name!r}; use one of {_FAMILIES}")


@dataclass(frozen=True)
class KernelSpec:
    """Kernel family plus scale t (ignored by the identity)."""

    family: str = IDENTITY
    t: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "family", canonical_family(self.family))
        if not np.isfinite(self.t) or self.t < 0:
            raise ValueError(f"kernel scale t must be >= 0, got {self.t}")

    @property
    def is_identity(self) -> bool:
        return self.family == IDENTITY or self.t == 0.0


@dataclass(frozen=True)
class SpectralKernel:
    """A kernel realized as a real multiplier on the rfft2 grid."""

    grid: GridSpec
    spec: KernelSpec
    multiplier: np.ndarray = field(repr=False)  # shape (ny, nx//2 + 1)

    @property
    def is_identity(self) -> bool:
        return self.spec.is_identity


def build_multiplier(spec: KernelSpec, grid: GridSpec) -> SpectralKernel:
    """Sample the kernel's Fourier multiplier at the torus frequencies."""
    xi_x = scipy.fft.rfftfreq(grid.nx, d=grid.h)
    xi_y = scipy.fft.fftfreq(grid.ny, d=grid.h)
    if spec.is_identity:
        mult = np.ones((grid.ny, xi_x.size))
    else:
        xi2 = xi_x[None, :] ** 2 + xi_y[:, None] ** 2
        if spec.family == GAUSSIAN:
            mult = np.exp(-np.pi * spec.t * xi2)
        else:
            mult = np.exp(-np.pi * spec.t * np.sqrt(xi2))
    return SpectralKernel(grid, spec, mult)


_cache: dict[tuple, SpectralKernel] = {}
_cache_lock = Lock()


def get_kernel(spec: KernelSpec, grid: GridSpec) -> SpectralKernel:
    """build_multiplier with a read-mostly per-(spec, grid) cache."""
    key = (spec.family, spec.t, grid.nx, grid.ny, grid.h)
    kern = _cache.get(key)
    if kern is None:
        kern = build_multiplier(spec, grid)
        with _cache_lock:
            _cache.setdefault(key, kern)
    return kern


def convolve_arrays(kernel: SpectralKernel, u: np.ndarray) -> np.ndarray:
    if kernel.is_identity:
        return u
    return scipy.fft.irfft2(kernel.multiplier * scipy.fft.rfft2(u), s=u.shape)


def convolve(kernel: SpectralKernel, u: ScalarField) -> ScalarField:
    """Exact periodic convolution K*u (real output by construction)."""
    check_same_grid(kernel, u)
    if kernel.is_identity:
        return u
    return ScalarField(u.grid, convolve_arrays(kernel, u.values))


def spatial_kernel(kernel: SpectralKernel) -> ScalarField:
    """The kernel as a spatial field: inverse transform of the multiplier,
    normalized so that sum h^2 * K = multiplier(0) = 1."""
    grid = kernel.grid
    values = scipy.fft.irfft2(kernel.multiplier.astype(complex), s=grid.shape)
    return ScalarField(grid, values / grid.cell_area)


def kernel_lp_norm(kernel: SpectralKernel, p: int) -> float:
    """||K||_p of the spatial kernel (||K||_1 = 1 for these families)."""
    from .grid import lp_norm

    return lp_norm(spatial_kernel(kernel), p)


def l1_smoothing_curve(f: ScalarField, family: str, t_list) -> list[float]:
    """||K_t * f||_1 for each t; nonincreasing in t for these kernels."""
    t_arr = np.asarray(list(t_list), dtype=float)
    if t_arr.size == 0:
        return []
    if np.any(t_arr < 0):
        raise ValueError("t_list entries must be >= 0")
    if np.any(np.diff(t_arr) <= 0):
        raise ValueError("t_list must be strictly increasing")
    from .grid import lp_norm

    out = []
    for t in t_arr:
        kern = get_kernel(KernelSpec(family, float(t)), f.grid)
        out.append(lp_norm(convolve(kern, f), 1))
    return out
