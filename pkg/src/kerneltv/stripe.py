"""The striped-texture construction with prescribed level curves.

J is the +/-1 vertical stripe pattern of period 2.  With lam chosen so
that ||lam * K*J||_* = 1, the field U = lam*K*J drives the level-curve
ODE

    y'' = U(x) * (1 + y'^2)^(3/2),

whose solutions y(x) have inclination sin(theta(x)) equal to an
antiderivative of U (first integral).  Curves exist as graphs over the
whole x-torus only while |sin theta| < 1; at exact calibration the
slope diverges at the stripe boundaries, so the construction runs at a
slope cap: lam is set from the antiderivative range so the peak slope
equals the cap (default 900, under the blow-up guard of 1000).

u is assembled from a curve and its mirror image: the region between a
lower curve (following the ODE) and an upper curve (following the
mirror ODE) is filled either sharply (assembly="band", an indicator)
or by a linear ramp up each boundary (assembly="ramp", smooth level
sets for curvature checks).  Setting f = u + J makes K*(f-u) = K*J,
whose sign pattern is J itself, so the pair (f, u) is handed to the
optimality verifier as numerical evidence; varying the initial height
y0 (or the slope offset yp0) produces distinct candidates.

All x-dependent quantities are evaluated on an 8x refined trigonometric
interpolation of the grid row, so the integration sees the same smooth
U as the spectral convolution, with no interpolation bias against the
calibration margin.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.fft

from .energy import ProblemParams
from .errors import GeometryError, OdeBlowup
from .gnorm import StarNormResult, star_norm
from .grid import GridSpec, ScalarField
from .kernels import KernelSpec, convolve, get_kernel
from .optimality import OptimalityReport, verify_optimality
from .solver import SolverConfig
from .synth import stripes

UPSAMPLE = 8
SLOPE_GUARD = 1e3


@dataclass
class StripeCase:
    lam: float
    star_check: StarNormResult        # star norm of K*J on the grid
    calibration_residual: float       # |lam * star - 1|
    U: ScalarField                    # lam * K*J
    x_centers: np.ndarray
    lower_curve: np.ndarray           # y = Y(x) at the cell centers
    upper_curve: np.ndarray           # mirror curve
    u: ScalarField
    f: ScalarField
    report: OptimalityReport
    assembly: str
    slope_max: float


class TrigRow:
    """Exact evaluation of a periodic grid row (and its antiderivative)
    at arbitrary x, via the row's trigonometric modes.

    The row samples live at cell centers x_j = (j + 1/2) h; the modes of
    that sequence give the band-limited interpolant, which matches the
    spectral convolution's view of the field exactly.
    """

    def __init__(self, row: np.ndarray, h: float):
        n = row.size
        self.period = n * h
        spec = scipy.fft.rfft(row) / n
        xi = scipy.fft.rfftfreq(n, d=h)
        keep = np.abs(spec) > 1e-15 * max(np.abs(spec).max(), 1e-300)
        keep[0] = True
        weight = np.where((xi > 0) & (2 * xi < 1.0 / h - 1e-12), 2.0, 1.0)
        self.xi = xi[keep]
        self.coef = (weight[keep] * spec[keep])
        # modes are referenced to x = h/2 (the first cell center)
        self.phase_origin = h / 2.0

    def __call__(self, x: float) -> float:
        ph = 2.0 * np.pi * self.xi * (x - self.phase_origin)
        return float(np.sum(self.coef.real * np.cos(ph)
                            - self.coef.imag * np.sin(ph)))

    def sample(self, xs: np.ndarray) -> np.ndarray:
        ph = 2.0 * np.pi * np.outer(np.asarray(xs) - self.phase_origin, self.xi)
        return (np.cos(ph) @ self.coef.real - np.sin(ph) @ self.coef.imag)

    def antiderivative(self) -> "TrigRow":
        out = TrigRow.__new__(TrigRow)
        out.period = self.period
        out.phase_origin = self.phase_origin
        nonzero = self.xi > 0
        out.xi = self.xi[nonzero]
        out.coef = self.coef[nonzero] / (2j * np.pi * out.xi)
        return out

    def derivative(self) -> "TrigRow":
        out = TrigRow.__new__(TrigRow)
        out.period = self.period
        out.phase_origin = self.phase_origin
        out.xi = self.xi
        out.coef = self.coef * (2j * np.pi * self.xi)
        return out


def _refine_extremum(W: TrigRow, U: TrigRow, x_guess: float,
                     iters: int = 30) -> tuple[float, float]:
    """Newton-polish an extremum of W (a zero of W' = U)."""
    dU = U.derivative()
    x = x_guess
    for _ in range(iters):
        slope = dU(x)
        if slope == 0.0:
            break
        step = U(x) / slope
        x -= step
        if abs(step) < 1e-15 * max(1.0, abs(x)):
            break
    return x, W(x)


def integrate_level_curve(U: "TrigRow | np.ndarray", h: float, x0: float,
                          y0: float, slope0: float, ode_sign: float = 1.0,
                          slope_cap: float = SLOPE_GUARD,
                          n_centers: int | None = None,
                          close: bool = True) -> np.ndarray:
    """Level curve of the prescribed-curvature ODE across one x-period.

    The graph ODE y'' = sign * U(x) (1 + y'^2)^(3/2) is integrated in its
    arclength form (x' = cos theta, y' = sin theta, theta' = sign * U),
    which stays smooth however steep the graph becomes; the classical
    4th-order scheme with fixed step h/4 is applied to that system.  y is
    recorded at every cell center by cubic Hermite interpolation inside
    the step that crosses it, and the round-trip drift (round-off sized
    for symmetric data) is removed so the curve closes on the torus.

    Raises OdeBlowup when |dy/dx| exceeds the guard (the curve stops
    being a graph over x).
    """
    if isinstance(U, np.ndarray):
        U = TrigRow(U, h)
    if n_centers is None:
        n_centers = int(round(U.period / h))
    period = U.period
    y_nodes = np.full(n_centers, np.nan)
    ds = h / 4.0

    def rhs(x: float, theta: float) -> tuple[float, float, float]:
        return (np.cos(theta), np.sin(theta), ode_sign * U(x))

    theta = np.arctan(slope0)
    x, y = x0, y0
    cap_angle = np.arctan(slope_cap)
    # first center at or after x0
    next_j = int(np.ceil((x0 - h / 2.0) / h - 1e-12))
    guard = 0
    max_steps = int(np.ceil(20 * period / ds)) + 16
    while x < x0 + period - 1e-12:
        guard += 1
        if guard > max_steps:
            raise OdeBlowup("level curve advanced too slowly across x "
                            "(slope pinned at the cap)")
        k1 = rhs(x, theta)
        k2 = rhs(x + 0.5 * ds * k1[0], theta + 0.5 * ds * k1[2])
        k3 = rhs(x + 0.5 * ds * k2[0], theta + 0.5 * ds * k2[2])
        k4 = rhs(x + ds * k3[0], theta + ds * k3[2])
        dx = (ds / 6.0) * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        dy = (ds / 6.0) * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        dth = (ds / 6.0) * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2])
        x_new, y_new, theta_new = x + dx, y + dy, theta + dth
        if abs(theta_new) >= cap_angle:
            raise OdeBlowup(
                f"|dy/dx| = {abs(np.tan(min(abs(theta_new), np.pi / 2 - 1e-12))):.3g} "
                f"exceeded {slope_cap:g}")
        if dx <= 0:
            raise OdeBlowup("level curve left the graph regime (dx <= 0)")
        # record centers crossed in this step (cubic Hermite in x)
        while (next_j + 0.5) * h <= x_new + 1e-15:
            xc = (next_j + 0.5) * h
            t = (xc - x) / dx
            m0 = np.tan(theta)
            m1 = np.tan(theta_new)
            hh00 = (1 + 2 * t) * (1 - t) ** 2
            hh10 = t * (1 - t) ** 2
            hh01 = t * t * (3 - 2 * t)
            hh11 = t * t * (t - 1)
            yc = (hh00 * y + hh10 * dx * m0 + hh01 * y_new + hh11 * dx * m1)
            pos = next_j % n_centers
            if np.isnan(y_nodes[pos]):
                y_nodes[pos] = yc
            next_j += 1
        if x_new >= x0 + period:
            # Hermite-interpolate y exactly at the period end
            t = (x0 + period - x) / dx
            m0, m1 = np.tan(theta), np.tan(theta_new)
            hh00 = (1 + 2 * t) * (1 - t) ** 2
            hh10 = t * (1 - t) ** 2
            hh01 = t * t * (3 - 2 * t)
            hh11 = t * t * (t - 1)
            y_end = hh00 * y + hh10 * dx * m0 + hh01 * y_new + hh11 * dx * m1
            x, y, theta = x_new, y_new, theta_new
            break
        x, y, theta = x_new, y_new, theta_new
    else:
        y_end = y
    drift = y_end - y0
    if np.any(np.isnan(y_nodes)):
        raise RuntimeError("level-curve sampling missed a cell center")
    if not close:
        return y_nodes
    centers = (np.arange(n_centers) + 0.5) * h
    offsets = (centers - x0) % period
    return y_nodes - drift * offsets / period


def stripe_case(grid: GridSpec, t: float, y0: float = 0.0, yp0: float = 0.0,
                family: str = "gaussian", slope_cap: float = 900.0,
                assembly: str = "band", ramp_width: float | None = None,
                config: SolverConfig | None = None,
                verify: bool = True) -> StripeCase:
    """Build the stripe pattern, calibrate lam, integrate the level
    curves, assemble (f, u) and run the optimality verifier.

    yp0 is a slope offset (added in the sin-inclination variable) on top
    of the calibrated start; y0 shifts the whole curve pair vertically.
    """
    if slope_cap >= SLOPE_GUARD:
        raise ValueError(f"slope_cap must stay below the guard {SLOPE_GUARD:g}")
    if assembly not in ("band", "ramp"):
        raise ValueError("assembly must be 'band' or 'ramp'")
    Lx, Ly = grid.extent
    if Lx < 4.0 - 1e-9:
        raise GeometryError("need at least two stripe periods (torus width >= 4)")
    h = grid.h

    J = stripes(grid, period=2.0)
    kern = get_kernel(KernelSpec(family, t), grid)
    KJ = convolve(kern, J)
    row = KJ.values[0]
    if not np.allclose(KJ.values, row[None, :], atol=1e-12):
        raise RuntimeError("K*J is not constant along y")

    # the trig interpolant of K*J, its antiderivative, and the slope-cap
    # calibration: sin(theta) sweeps an interval of width lam*(range W),
    # so lam is set to make the peak slope exactly the cap
    U1 = TrigRow(row, h)
    W = U1.antiderivative()
    xs = (np.arange(UPSAMPLE * grid.nx) + 0.5) * (h / UPSAMPLE)
    W_fine = W.sample(xs)
    # Newton-polish the extrema of W (the lattice max undershoots; the
    # slope-cap margin is tiny, so the true continuum extrema matter)
    _, w_lo = _refine_extremum(W, U1, float(xs[np.argmin(W_fine)]))
    _, w_hi = _refine_extremum(W, U1, float(xs[np.argmax(W_fine)]))
    s_target = slope_cap / np.hypot(1.0, slope_cap)
    lam = 2.0 * s_target / (w_hi - w_lo)

    # start anywhere; the first integral sin(theta(x)) = sin0 + lam*(W - W0)
    # fixes the starting inclination so the peak hits exactly s_target
    start_idx = int(np.argmin(np.abs(W_fine - 0.5 * (w_lo + w_hi))))
    x0 = float(xs[start_idx])
    sin0 = s_target - lam * (w_hi - W(x0))
    sin0 = float(np.clip(sin0 + yp0 / np.hypot(1.0, yp0), -1 + 1e-12, 1 - 1e-12))
    slope0 = sin0 / np.sqrt(1.0 - sin0 * sin0)

    Y = integrate_level_curve(TrigRow(lam * row, h), h, x0, y0, slope0,
                              n_centers=grid.nx)
    slope_max = float(np.abs(np.diff(np.concatenate([Y, Y[:1]]))).max() / h)

    # assemble u between Y and the mirror curve c - Y
    ramp = 0.0 if assembly == "band" else (ramp_width if ramp_width else 10 * h)
    amp = float(Y.max() - Y.min())
    a = 2 * h
    c_lo = 2 * float(Y.max()) + a + 2 * ramp + 2 * h
    c_hi = Ly - 2 * h + 2 * float(Y.min())
    if c_lo > c_hi:
        raise GeometryError(
            f"torus height {Ly:.3g} too short for curve arms of height {amp:.3g}"
        )
    c = 0.5 * (c_lo + c_hi)
    Z = c - Y

    _, YY = grid.cell_centers()
    w = (YY - Y[None, :]) % Ly
    upper = (c - 2.0 * Y)[None, :]
    if assembly == "band":
        u_vals = ((w >= a) & (w <= upper)).astype(np.float64)
    else:
        u_vals = np.clip(np.minimum((w - a) / ramp, (upper - w) / ramp), 0.0, 1.0)
    u = ScalarField(grid, u_vals)
    f = ScalarField(grid, u_vals + J.values)

    params = ProblemParams(p=1, q=1, lam=lam, kernel=KernelSpec(family, t))
    star_check = star_norm(KJ, config)
    calib = abs(lam * star_check.value - 1.0)
    if verify:
        report = verify_optimality(f, u, params, config)
    else:
        report = OptimalityReport(star_check.value, 0.0, 0.0, calib, 1.0)
    x_centers = (np.arange(grid.nx) + 0.5) * h
    return StripeCase(
        lam=lam, star_check=star_check, calibration_residual=calib,
        U=ScalarField(grid, lam * KJ.values), x_centers=x_centers,
        lower_curve=Y, upper_curve=Z, u=u, f=f, report=report,
        assembly=assembly, slope_max=slope_max,
    )
