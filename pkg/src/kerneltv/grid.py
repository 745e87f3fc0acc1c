"""Periodic-grid fields and discrete differential operators.

Everything lives on a uniform nx-by-ny grid covering the torus
[0, nx*h) x [0, ny*h).  Values are float64 arrays of shape (ny, nx),
row-major, with x along columns and y along rows.  Integrals are cell
sums times the cell area h^2.

The gradient uses forward differences with periodic wrap and the
divergence uses backward differences, so that

    <grad u, w> + <u, div w> = 0

holds exactly (up to round-off) for every pair of fields.  The total
variation is the cell sum of the pointwise l2 magnitude of the forward
gradient; this is the standard isotropic discretization and does not
satisfy the coarea formula exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import GridMismatch


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid: nx, ny cell counts and spacing h."""

    nx: int
    ny: int
    h: float

    def __post_init__(self):
        if int(self.nx) != self.nx or int(self.ny) != self.ny:
            raise ValueError("nx and ny must be integers")
        # counts of 2 or 3 make the periodic stencils overlap themselves;
        # a count of 1 is the (degenerate) 1D restriction
        for n in (self.nx, self.ny):
            if n != 1 and n < 4:
                raise ValueError(
                    f"grid counts must be 1 or >= 4, got {self.nx}x{self.ny}")
        if not (np.isfinite(self.h) and self.h > 0):
            raise ValueError(f"grid spacing must be positive, got {self.h}")

    @property
    def shape(self) -> tuple[int, int]:
        return (self.ny, self.nx)

    @property
    def cell_area(self) -> float:
        return self.h * self.h

    @property
    def extent(self) -> tuple[float, float]:
        """Physical size (Lx, Ly) of the torus."""
        return (self.nx * self.h, self.ny * self.h)

    def cell_centers(self) -> tuple[np.ndarray, np.ndarray]:
        """Physical coordinates (X, Y) of cell centers, shape (ny, nx)."""
        x = (np.arange(self.nx) + 0.5) * self.h
        y = (np.arange(self.ny) + 0.5) * self.h
        return np.meshgrid(x, y)

    @property
    def center(self) -> tuple[float, float]:
        """Center of the cell nearest the middle of the domain."""
        return ((self.nx // 2 + 0.5) * self.h, (self.ny // 2 + 0.5) * self.h)


def _as_values(grid: GridSpec, values: np.ndarray, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.shape != grid.shape:
        raise ValueError(f"{name} has shape {arr.shape}, expected {grid.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


@dataclass(frozen=True)
class ScalarField:
    """Real scalar samples on a periodic grid."""

    grid: GridSpec
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "values", _as_values(self.grid, self.values, "values"))

    @classmethod
    def zeros(cls, grid: GridSpec) -> "ScalarField":
        return cls(grid, np.zeros(grid.shape))

    @classmethod
    def full(cls, grid: GridSpec, value: float) -> "ScalarField":
        return cls(grid, np.full(grid.shape, float(value)))

    def integral(self) -> float:
        return float(self.values.sum() * self.grid.cell_area)

    def mean(self) -> float:
        return float(self.values.mean())


@dataclass(frozen=True)
class VectorField:
    """Two-component field (x and y components) on a periodic grid."""

    grid: GridSpec
    x: np.ndarray = field(repr=False)
    y: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "x", _as_values(self.grid, self.x, "x"))
        object.__setattr__(self, "y", _as_values(self.grid, self.y, "y"))

    @classmethod
    def zeros(cls, grid: GridSpec) -> "VectorField":
        return cls(grid, np.zeros(grid.shape), np.zeros(grid.shape))

    def magnitude(self) -> np.ndarray:
        """Pointwise l2 magnitude sqrt(x^2 + y^2)."""
        return np.hypot(self.x, self.y)


def check_same_grid(a, b) -> None:
    if a.grid != b.grid:
        raise GridMismatch(f"grids differ: {a.grid} vs {b.grid}")


# -- raw-array operators (used by the solvers; fields wrap these) ------------

def grad_arrays(u: np.ndarray, h: float) -> tuple[np.ndarray, np.ndarray]:
    """Forward differences with periodic wrap."""
    gx = (np.roll(u, -1, axis=1) - u) / h
    gy = (np.roll(u, -1, axis=0) - u) / h
    return gx, gy


def div_arrays(wx: np.ndarray, wy: np.ndarray, h: float) -> np.ndarray:
    """Backward differences with periodic wrap; exact negative adjoint of
    grad_arrays."""
    return (wx - np.roll(wx, 1, axis=1) + wy - np.roll(wy, 1, axis=0)) / h


def tv_arrays(u: np.ndarray, h: float) -> float:
    gx, gy = grad_arrays(u, h)
    return float(np.hypot(gx, gy).sum() * h * h)


# -- field-level operations ---------------------------------------------------

def gradient(u: ScalarField) -> VectorField:
    """Discrete gradient (forward differences, periodic wrap)."""
    gx, gy = grad_arrays(u.values, u.grid.h)
    return VectorField(u.grid, gx, gy)


def divergence(w: VectorField) -> ScalarField:
    """Discrete divergence (backward differences, periodic wrap)."""
    return ScalarField(w.grid, div_arrays(w.x, w.y, w.grid.h))


def bv_seminorm(u: ScalarField) -> float:
    """Isotropic discrete total variation: sum of h^2 * |grad u|."""
    return tv_arrays(u.values, u.grid.h)


def lp_norm(u: ScalarField, p: int) -> float:
    """(sum h^2 |u|^p)^(1/p) for p in {1, 2}."""
    if p == 1:
        return float(np.abs(u.values).sum() * u.grid.cell_area)
    if p == 2:
        return float(np.sqrt((u.values ** 2).sum() * u.grid.cell_area))
    raise ValueError(f"p must be 1 or 2, got {p}")


def threshold(u: ScalarField, t: float) -> ScalarField:
    """Indicator field of the superlevel set {u > t} (strict)."""
    return ScalarField(u.grid, (u.values > t).astype(np.float64))


def inner(a: ScalarField, b: ScalarField) -> float:
    """L2 pairing with the cell measure: sum h^2 a*b."""
    check_same_grid(a, b)
    return float((a.values * b.values).sum() * a.grid.cell_area)


def vector_inner(a: VectorField, b: VectorField) -> float:
    check_same_grid(a, b)
    return float(((a.x * b.x) + (a.y * b.y)).sum() * a.grid.cell_area)
