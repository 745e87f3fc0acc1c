"""The star norm (texture dual norm) of a mean-zero field.

For v with integral zero,

    ||v||_* = min { max_c |w(c)|_2 :  div w = v }

over vector fields w on the torus; by duality it is also
sup_s <s, v> / TV(s), which pairs against the BV seminorm:
|<h, v>| <= TV(h) * ||v||_*.

The constraint is eliminated rather than penalized: a particular
solution w0 = grad(laplace^{-1} v) is computed spectrally, and the
divergence-free fields on the discrete torus are exactly
curl(psi) + const, with curl(psi) = (d-_y psi, -d-_x psi).  The
remaining unconstrained min-max problem

    min_{psi, c} max-magnitude( w0 + curl psi + c )

is solved by a diagonally preconditioned primal-dual scheme whose dual
variable z lives in the group-l1 ball {h^2 * sum |z_c|_2 <= 1}.  Any
(psi, c) yields an exactly feasible witness, hence an upper bound;
projecting z onto gradient fields z = grad(s) yields the certified
lower bound <s, v>/TV(s).  Both bounds are evaluated at the current
iterate and at its ergodic average (the average converges smoothly and
usually supplies the tighter side), so the returned value carries a
duality bracket.  The feasibility residual ||div w - v||_2 / ||v||_2 is
round-off sized by construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.fft

from .errors import NonConvergence, NonzeroMean
from .grid import GridSpec, ScalarField, VectorField, div_arrays, grad_arrays
from .prox import proj_group_l1_ball
from .solver import SolverConfig

EPS_MEAN = 1e-8


@dataclass
class StarNormResult:
    value: float                 # certified upper bound, attained by witness
    lower_bound: float
    witness: VectorField
    feasibility_residual: float
    iterations: int
    converged: bool

    @property
    def bracket(self) -> tuple[float, float]:
        return (self.lower_bound, self.value)


def default_gnorm_config() -> SolverConfig:
    return SolverConfig(max_iter=60000, gap_tol=1e-4, check_every=100,
                        step_balance=8.0)


def _laplace_symbol(grid: GridSpec) -> np.ndarray:
    kx = np.arange(grid.nx // 2 + 1)
    ky = np.arange(grid.ny)
    sx = np.sin(np.pi * kx / grid.nx) ** 2
    sy = np.sin(np.pi * ky / grid.ny) ** 2
    return -(4.0 / grid.h ** 2) * (sx[None, :] + sy[:, None])


def poisson_gradient(v: np.ndarray, grid: GridSpec) -> tuple[np.ndarray, np.ndarray]:
    """w0 = grad(laplace^{-1} v) so that div w0 = v (v must be mean-zero)."""
    symbol = _laplace_symbol(grid)
    vhat = scipy.fft.rfft2(v)
    with np.errstate(divide="ignore", invalid="ignore"):
        phat = np.where(symbol != 0.0, vhat / symbol, 0.0)
    p = scipy.fft.irfft2(phat, s=grid.shape)
    return grad_arrays(p, grid.h)


def _curl(psi: np.ndarray, h: float) -> tuple[np.ndarray, np.ndarray]:
    """Divergence-free field (d-_y psi, -d-_x psi); div(curl) = 0 exactly."""
    ax = (psi - np.roll(psi, 1, axis=0)) / h
    ay = -(psi - np.roll(psi, 1, axis=1)) / h
    return ax, ay


def _curl_adjoint(zx: np.ndarray, zy: np.ndarray, h: float) -> np.ndarray:
    """Adjoint of _curl under the uniform cell measure."""
    dzy = (np.roll(zy, -1, axis=1) - zy) / h
    dzx = (np.roll(zx, -1, axis=0) - zx) / h
    return dzy - dzx


def star_norm(v: ScalarField, config: SolverConfig | None = None,
              certificate: ScalarField | None = None) -> StarNormResult:
    """Compute ||v||_* with a certified duality bracket.

    certificate, when given, is a candidate maximizer s of the dual
    characterization <s, v>/TV(s); it seeds the lower bound and warm
    starts the dual variable (a minimizer of the decomposition energy is
    the natural certificate for its own optimality field).

    Raises NonzeroMean if |integral of v| > EPS_MEAN * ||v||_1, and
    NonConvergence if the witness loses feasibility or the bracket stays
    too wide to certify anything; a bracket merely wider than gap_tol is
    reported via converged=False.
    """
    if config is None:
        config = default_gnorm_config()
    grid = v.grid
    h, area = grid.h, grid.cell_area
    l1 = float(np.abs(v.values).sum() * area)
    if l1 == 0.0:
        return StarNormResult(0.0, 0.0, VectorField.zeros(grid), 0.0, 0, True)
    if abs(v.integral()) > EPS_MEAN * l1:
        raise NonzeroMean(
            f"|integral| = {abs(v.integral()):.3e} exceeds {EPS_MEAN} * ||v||_1"
        )
    v_norm2 = float(np.sqrt((v.values ** 2).sum() * area))

    w0x, w0y = poisson_gradient(v.values, grid)

    psi = np.zeros(grid.shape)
    cx = cy = 0.0
    psibar, cxbar, cybar = psi, cx, cy
    zx = np.zeros(grid.shape)
    zy = np.zeros(grid.shape)
    psi_acc = np.zeros(grid.shape)
    c_acc = np.zeros(2)
    zx_acc = np.zeros(grid.shape)
    zy_acc = np.zeros(grid.shape)

    bal = config.step_balance
    sigma = bal / (2.0 / h + 1.0)
    tau_psi = (h / 4.0) / bal
    tau_c = 1.0 / bal
    theta = config.theta

    best_ub = float(np.hypot(w0x, w0y).max())
    best_wx, best_wy = w0x.copy(), w0y.copy()
    best_lb = 0.0
    iterations = 0
    converged = False

    if certificate is not None:
        sx, sy = grad_arrays(certificate.values, h)
        tv_cert = float(np.hypot(sx, sy).sum() * area)
        if tv_cert > 0.0:
            pairing = float((certificate.values * v.values).sum() * area)
            best_lb = abs(pairing) / tv_cert
            # warm start the dual along the certificate's gradient
            # (<s, v> = -<grad s, w> for any feasible w, hence the sign)
            orient = -np.sign(pairing) if pairing != 0 else -1.0
            zx = orient * sx / tv_cert
            zy = orient * sy / tv_cert

    def try_upper(psi_cand: np.ndarray, c_cand) -> None:
        nonlocal best_ub, best_wx, best_wy
        ax, ay = _curl(psi_cand, h)
        wx, wy = w0x + ax + c_cand[0], w0y + ay + c_cand[1]
        ub = float(np.hypot(wx, wy).max())
        if ub < best_ub:
            best_ub = ub
            best_wx, best_wy = wx, wy

    def try_lower(zx_cand: np.ndarray, zy_cand: np.ndarray) -> None:
        nonlocal best_lb
        div_z = div_arrays(zx_cand, zy_cand, h)
        sx, sy = poisson_gradient(div_z - div_z.mean(), grid)
        denom = float(np.hypot(sx, sy).sum() * area)
        if denom > 0.0:
            lb = abs(float((sx * w0x + sy * w0y).sum() * area)) / denom
            best_lb = max(best_lb, lb)

    for it in range(1, config.max_iter + 1):
        iterations = it
        ax, ay = _curl(psibar, h)
        zx, zy = proj_group_l1_ball(zx + sigma * (w0x + ax + cxbar),
                                    zy + sigma * (w0y + ay + cybar),
                                    1.0, area)
        psi_old, cx_old, cy_old = psi, cx, cy
        psi = psi - tau_psi * _curl_adjoint(zx, zy, h)
        cx = cx - tau_c * float(zx.mean())
        cy = cy - tau_c * float(zy.mean())
        psibar = psi + theta * (psi - psi_old)
        cxbar = cx + theta * (cx - cx_old)
        cybar = cy + theta * (cy - cy_old)
        psi_acc += psi
        c_acc += (cx, cy)
        zx_acc += zx
        zy_acc += zy

        if it % config.check_every == 0 or it == config.max_iter:
            try_upper(psi, (cx, cy))
            try_upper(psi_acc / it, c_acc / it)
            try_lower(zx, zy)
            try_lower(zx_acc / it, zy_acc / it)
            if best_ub - best_lb <= config.gap_tol * max(best_ub, 1e-30):
                converged = True
                break

    resid = div_arrays(best_wx, best_wy, h) - v.values
    feas = float(np.sqrt((resid ** 2).sum() * area)) / v_norm2
    if feas > 1e-6:
        raise NonConvergence(f"witness feasibility residual {feas:.3e} > 1e-6")
    if best_ub - best_lb > 0.5 * best_ub:
        raise NonConvergence(
            f"star-norm bracket [{best_lb:.6g}, {best_ub:.6g}] carries no "
            f"meaningful certificate after {iterations} iterations"
        )
    return StarNormResult(value=best_ub, lower_bound=best_lb,
                          witness=VectorField(grid, best_wx, best_wy),
                          feasibility_residual=feas, iterations=iterations,
                          converged=converged)
