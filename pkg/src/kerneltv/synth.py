"""Synthetic test images: disks, squares, stripes and step patterns.

Disks and squares are pixelized by cell-center membership and must fit
with at least 10% of the extent to spare toward the torus seam, so the
compact shapes behave like compactly supported data on the plane.
Stripes and steps are periodic by design and exempt from the margin.
"""

from __future__ import annotations

import numpy as np

from .errors import GeometryError
from .grid import GridSpec, ScalarField

SHAPES = ("disk", "square", "stripes", "steps")


def _check_margin(grid: GridSpec, center: tuple[float, float], half_extent: float):
    Lx, Ly = grid.extent
    margin = 0.1 * min(Lx, Ly)
    cx, cy = center
    if (cx - half_extent < margin or cx + half_extent > Lx - margin
            or cy - half_extent < margin or cy + half_extent > Ly - margin):
        raise GeometryError(
            f"shape of half-extent {half_extent} at {center} leaves less than a "
            f"10% margin to the seam of the {Lx} x {Ly} torus"
        )


def disk(grid: GridSpec, radius: float, amplitude: float = 1.0,
         center: tuple[float, float] | None = None) -> ScalarField:
    """amplitude * indicator of a disk, pixelized by cell-center membership."""
    if radius <= 0:
        raise GeometryError(f"disk radius must be positive, got {radius}")
    if center is None:
        center = grid.center
    _check_margin(grid, center, radius)
    X, Y = grid.cell_centers()
    inside = (X - center[0]) ** 2 + (Y - center[1]) ** 2 <= radius * radius
    return ScalarField(grid, amplitude * inside.astype(np.float64))


def square(grid: GridSpec, side: float, amplitude: float = 1.0,
           center: tuple[float, float] | None = None) -> ScalarField:
    """amplitude * indicator of an axis-aligned square."""
    if side <= 0:
        raise GeometryError(f"square side must be positive, got {side}")
    if center is None:
        center = grid.center
    _check_margin(grid, center, side / 2.0)
    X, Y = grid.cell_centers()
    inside = (np.abs(X - center[0]) <= side / 2.0) & (np.abs(Y - center[1]) <= side / 2.0)
    return ScalarField(grid, amplitude * inside.astype(np.float64))


def stripes(grid: GridSpec, period: float = 2.0) -> ScalarField:
    """The +/-1 vertical stripe pattern with the given period in x.

    The torus width must be a whole number of periods and each half
    period a whole number of cells, so the values are exactly +/-1 with
    mean exactly zero.
    """
    Lx, _ = grid.extent
    n_periods = Lx / period
    cells_per_half = period / 2.0 / grid.h
    if abs(n_periods - round(n_periods)) > 1e-9 or round(n_periods) < 1:
        raise GeometryError(
            f"torus width {Lx} is not a whole number of stripe periods {period}"
        )
    if abs(cells_per_half - round(cells_per_half)) > 1e-9:
        raise GeometryError(
            f"half period {period / 2} is not a whole number of cells (h={grid.h})"
        )
    j = np.arange(grid.nx)
    half = int(round(cells_per_half))
    sign = np.where((j // half) % 2 == 0, 1.0, -1.0)
    return ScalarField(grid, np.tile(sign, (grid.ny, 1)))


def steps(grid: GridSpec, levels) -> ScalarField:
    """Vertical bands taking the given values left to right (periodic)."""
    levels = np.asarray(list(levels), dtype=float)
    if levels.size < 1:
        raise GeometryError("steps needs at least one level")
    band = np.repeat(levels, int(np.ceil(grid.nx / levels.size)))[: grid.nx]
    return ScalarField(grid, np.tile(band, (grid.ny, 1)))


def synthesize(shape: str, grid: GridSpec, **geometry) -> ScalarField:
    """Dispatch by shape name; see the individual constructors."""
    try:
        maker = {"disk": disk, "square": square, "stripes": stripes, "steps": steps}[shape]
    except KeyError:
        raise GeometryError(f"unknown shape {shape!r}; expected one of {SHAPES}")
    return maker(grid, **geometry)
