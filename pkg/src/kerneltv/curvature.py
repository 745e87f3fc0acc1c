"""Contour extraction and discrete curvature of level-set boundaries.

Minimizing indicators have boundaries whose distributional mean
curvature is bounded by lam * ||K||_p.  The check extracts the 0.5-level
contour of a (near-)binary field by marching squares, resamples each
closed polyline at uniform arclength, lightly smooths it, and estimates
curvature by a least-squares circle fit over 5-point stencils.  Contours
of pixelized indicators carry ~0.3h vertex noise, so the estimator is
validated on exact disks (known curvature 1/R) before it is trusted on
solver output; the acceptance bound carries a 1.1 slack factor for the
same reason.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from skimage import measure

from .energy import ProblemParams
from .errors import NoContour
from .grid import ScalarField
from .kernels import get_kernel, kernel_lp_norm


def extract_contours(u: ScalarField, level: float = 0.5) -> list[np.ndarray]:
    """Closed 0.5-level polylines in physical coordinates, as (n, 2) arrays
    of (x, y) rows."""
    h = u.grid.h
    out = []
    for contour in measure.find_contours(u.values, level):
        closed = np.allclose(contour[0], contour[-1])
        if not closed:
            continue
        xy = np.empty((contour.shape[0] - 1, 2))
        xy[:, 0] = (contour[:-1, 1] + 0.5) * h
        xy[:, 1] = (contour[:-1, 0] + 0.5) * h
        out.append(xy)
    return out


def resample_closed(xy: np.ndarray, spacing: float) -> np.ndarray:
    """Uniform-arclength resampling of a closed polyline."""
    closed = np.vstack([xy, xy[:1]])
    seg = np.linalg.norm(np.diff(closed, axis=0), axis=1)
    s = np.concatenate([[0.0], np.cumsum(seg)])
    total = s[-1]
    n = max(8, int(round(total / spacing)))
    si = np.linspace(0.0, total, n, endpoint=False)
    x = np.interp(si, s, closed[:, 0])
    y = np.interp(si, s, closed[:, 1])
    return np.column_stack([x, y])


def _smooth_closed(xy: np.ndarray, window: int) -> np.ndarray:
    if window <= 1:
        return xy
    kernel = np.ones(window) / window
    pad = window // 2
    out = np.empty_like(xy)
    for k in range(2):
        ext = np.concatenate([xy[-pad:, k], xy[:, k], xy[:pad, k]])
        out[:, k] = np.convolve(ext, kernel, mode="valid")[: xy.shape[0]]
    return out


def _kasa_circle_curvature(pts: np.ndarray) -> float:
    """Unsigned curvature from a least-squares circle through the points."""
    x, y = pts[:, 0], pts[:, 1]
    A = np.column_stack([2 * x, 2 * y, np.ones_like(x)])
    b = x * x + y * y
    (a, bb, c), *_ = np.linalg.lstsq(A, b, rcond=None)
    r2 = c + a * a + bb * bb
    if r2 <= 0:
        return np.inf
    return 1.0 / np.sqrt(r2)


def polyline_curvatures(xy: np.ndarray, spacing: float,
                        smooth_window: int = 7, stencil: int = 3) -> np.ndarray:
    """Signed curvature samples along a closed polyline.

    The polyline is resampled at the given spacing, smoothed by a short
    moving average, and fit with circles over +/- stencil neighbors.
    """
    pts = _smooth_closed(resample_closed(xy, spacing), smooth_window)
    n = pts.shape[0]
    if n < 2 * stencil + 1:
        return np.empty(0)
    kappas = np.empty(n)
    idx = np.arange(-stencil, stencil + 1)
    for i in range(n):
        window = pts[(i + idx) % n]
        kappa = _kasa_circle_curvature(window)
        first, mid, last = window[0], window[stencil], window[-1]
        cross = ((mid[0] - first[0]) * (last[1] - mid[1])
                 - (mid[1] - first[1]) * (last[0] - mid[0]))
        kappas[i] = np.sign(cross) * kappa
    return kappas


def default_spacing(xy: np.ndarray, h: float) -> float:
    closed = np.vstack([xy, xy[:1]])
    perimeter = float(np.linalg.norm(np.diff(closed, axis=0), axis=1).sum())
    return max(2.0 * h, perimeter / 64.0)


@dataclass
class CurvatureReport:
    bound: float                  # lam * ||K||_p (without the slack)
    slack: float
    fraction_within: float
    n_samples: int
    n_contours: int
    kappa_abs_median: float
    kappa_abs_max: float
    samples: np.ndarray = field(repr=False, default_factory=lambda: np.empty(0))


def curvature_bound_check(u_binary: ScalarField, params: ProblemParams,
                          lam: float | None = None, level: float = 0.5,
                          slack: float = 1.1) -> CurvatureReport:
    """Fraction of contour curvature samples obeying |kappa| <= slack*lam*||K||_p.

    ||K||_p is measured on the realized spatial kernel of the grid.
    Raises NoContour when no closed level contour exists.
    """
    if lam is None:
        lam = params.lam
    contours = extract_contours(u_binary, level)
    if not contours:
        raise NoContour(f"no closed contour at level {level}")
    h = u_binary.grid.h
    samples = []
    for xy in contours:
        spacing = default_spacing(xy, h)
        k = polyline_curvatures(xy, spacing)
        if k.size:
            samples.append(k)
    if not samples:
        raise NoContour("contours too short to sample curvature")
    kappa = np.concatenate(samples)
    norm_kp = kernel_lp_norm(get_kernel(params.kernel, u_binary.grid), params.p)
    bound = lam * norm_kp
    within = float(np.mean(np.abs(kappa) <= slack * bound))
    return CurvatureReport(
        bound=bound,
        slack=slack,
        fraction_within=within,
        n_samples=int(kappa.size),
        n_contours=len(contours),
        kappa_abs_median=float(np.median(np.abs(kappa))),
        kappa_abs_max=float(np.abs(kappa).max()),
        samples=kappa,
    )
