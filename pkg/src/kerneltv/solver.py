"""First-order primal-dual solver for the decomposition energy.

The energy TV(u) + lam*||K*(f-u)||_p^q is minimized via the saddle form

    min_u max_{phi, psi}  <grad u, phi> + <K u, psi>
                          - indicator{|phi| <= 1} - G*(psi)

with the stacked linear operator u -> (grad u, K*u); G is the fidelity
as a function of K*u and G* its conjugate (see prox.py).  This avoids
inverting K and keeps every nonsmooth term prox-friendly.  Iterations
are the standard primal-dual scheme with over-relaxation theta:

    phi <- proj_ball(phi + sigma * grad(ubar))
    psi <- prox_{sigma G*}(psi + sigma * K ubar)
    u   <- u + tau * div(phi) - tau * K psi
    ubar <- u + theta * (u - u_old)

By default the steps are the diagonal-preconditioned ones built from the
operator's row and column sums (sigma_phi = h/2 per gradient component,
sigma_psi = 1/||K||_1, tau = 1/(4/h + ||K||_1)), which satisfy the
generalized step condition ||Sigma^(1/2) A T^(1/2)|| <= 1 and converge
far faster on these problems than scalar steps.  Explicit tau/sigma are
validated against tau * sigma * L^2 <= 1 with L the norm of the stacked
operator (estimated by seeded power iteration).

Convergence is monitored by a relative optimality gap assembled from the
two Fenchel-Young residuals and the dual feasibility residual

    gap = [TV(u) - <grad u, phi>] + [G(Ku) + G*(psi) - <Ku, psi>]
          + ||K psi - div phi||_2 * max(||u||_2, ||f||_2),

normalized by the primal energy.  The gap vanishes exactly at saddle
points, so it is a genuine optimality certificate (not merely a
fixed-point residual).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .energy import ProblemParams, fidelity
from .grid import (GridSpec, ScalarField, check_same_grid, div_arrays,
                   grad_arrays, tv_arrays)
from .kernels import SpectralKernel, convolve_arrays, get_kernel
from .prox import (fidelity_conjugate, make_fidelity_dual_prox, proj_unit_ball)


@dataclass(frozen=True)
class SolverConfig:
    """Iteration budget, gap tolerance and step-size controls.

    tau and sigma may be "auto" (derived from the operator norm with the
    balance factor step_balance) or explicit floats; explicit values must
    satisfy tau*sigma*L^2 <= 1."""

    max_iter: int = 20000
    gap_tol: float = 1e-6
    tau: float | str = "auto"
    sigma: float | str = "auto"
    theta: float = 1.0
    step_balance: float = 1.0
    check_every: int = 25
    init: str = "zero"  # or "data"
    power_iters: int = 50
    seed: int = 0

    def __post_init__(self):
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if not 0.0 <= self.theta <= 1.0:
            raise ValueError("theta must lie in [0, 1]")
        if self.init not in ("zero", "data"):
            raise ValueError("init must be 'zero' or 'data'")


@dataclass
class SolveResult:
    """Minimizer u, texture v = f - u, and the convergence record."""

    u: ScalarField
    v: ScalarField
    energy_trace: list[float] = field(repr=False)
    gap_trace: list[float] = field(repr=False)
    iterations: int = 0
    converged: bool = False

    @property
    def energy(self) -> float:
        return self.energy_trace[-1]


def operator_norm(params: ProblemParams, grid: GridSpec,
                  kernel: SpectralKernel, iters: int = 50, seed: int = 0) -> float:
    """Power-iteration estimate of ||u -> (grad u, K u)||."""
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(grid.shape)
    v /= np.linalg.norm(v)
    h = grid.h
    lam_max = 0.0
    for _ in range(iters):
        gx, gy = grad_arrays(v, h)
        w = -div_arrays(gx, gy, h) + convolve_arrays(kernel, convolve_arrays(kernel, v))
        lam_max = float(np.linalg.norm(w))
        if lam_max == 0.0:
            return 1.0
        v = w / lam_max
    return float(np.sqrt(lam_max))


def _resolve_steps(config: SolverConfig, L: float, h: float,
                   kernel_l1: float) -> tuple[float, float, float]:
    """Return (tau, sigma_phi, sigma_psi)."""
    bal = config.step_balance
    tau, sigma = config.tau, config.sigma
    if tau == "auto" and sigma == "auto":
        # diagonal preconditioning from row/column sums of (grad, K)
        return (1.0 / (bal * (4.0 / h + kernel_l1)),
                bal * h / 2.0, bal / kernel_l1)
    L_eff = L * 1.02  # slack for the power-iteration estimate
    if tau == "auto":
        sigma = float(sigma)
        return 0.99 / (sigma * L_eff * L_eff), sigma, sigma
    if sigma == "auto":
        tau = float(tau)
        s = 0.99 / (tau * L_eff * L_eff)
        return tau, s, s
    tau, sigma = float(tau), float(sigma)
    if tau * sigma * L * L > 1.0 + 1e-9:
        raise ValueError(
            f"step sizes violate tau*sigma*L^2 <= 1 (tau={tau}, sigma={sigma}, L={L:.4g})"
        )
    return tau, sigma, sigma


def solve(f: ScalarField, params: ProblemParams,
          config: SolverConfig = SolverConfig()) -> SolveResult:
    """Minimize TV(u) + lam*||K*(f-u)||_p^q over fields u.

    Returns when the relative optimality gap drops below config.gap_tol
    or the iteration budget runs out; in the latter case the best-energy
    iterate is returned with converged=False.  For (p, q) != (1, 1) the
    minimizer is unique, so the result does not depend on the
    initialization beyond the tolerance.
    """
    grid = f.grid
    kernel = get_kernel(params.kernel, grid)
    check_same_grid(kernel, f)
    h = grid.h
    area = grid.cell_area

    g = convolve_arrays(kernel, f.values)  # K*f, the fidelity shift
    prox_psi = make_fidelity_dual_prox(params.p, params.q, params.lam, g, area)

    u = np.zeros(grid.shape) if config.init == "zero" else f.values.copy()
    ubar = u.copy()
    phix = np.zeros(grid.shape)
    phiy = np.zeros(grid.shape)
    psi = np.zeros(grid.shape)

    if kernel.is_identity:
        kernel_l1 = 1.0
    else:
        from .kernels import spatial_kernel

        kernel_l1 = float(np.abs(spatial_kernel(kernel).values).sum() * area)
    if config.tau == "auto" and config.sigma == "auto":
        L = 0.0  # preconditioned path needs no operator-norm estimate
    else:
        L = operator_norm(params, grid, kernel, config.power_iters, config.seed)
    tau, sigma_phi, sigma_psi = _resolve_steps(config, L, h, kernel_l1)
    theta = config.theta

    f_norm = float(np.sqrt((f.values ** 2).sum() * area))
    energy_trace: list[float] = []
    gap_trace: list[float] = []
    best_energy = np.inf
    best_u = u.copy()
    converged = False
    iterations = 0

    def primal_energy(u_arr: np.ndarray, Ku: np.ndarray) -> float:
        resid = ScalarField(grid, g - Ku)
        return tv_arrays(u_arr, h) + fidelity(resid, params)

    for it in range(1, config.max_iter + 1):
        iterations = it
        gx, gy = grad_arrays(ubar, h)
        phix, phiy = proj_unit_ball(phix + sigma_phi * gx, phiy + sigma_phi * gy)
        psi = prox_psi(psi + sigma_psi * convolve_arrays(kernel, ubar), sigma_psi)
        Kpsi = convolve_arrays(kernel, psi)
        u_old = u
        u = u + tau * div_arrays(phix, phiy, h) - tau * Kpsi
        ubar = u + theta * (u - u_old)

        if it % config.check_every == 0 or it == config.max_iter:
            Ku = convolve_arrays(kernel, u)
            energy_now = primal_energy(u, Ku)
            energy_trace.append(energy_now)
            if energy_now < best_energy:
                best_energy = energy_now
                best_u = u.copy()

            gx_u, gy_u = grad_arrays(u, h)
            fy_tv = tv_arrays(u, h) - float((gx_u * phix + gy_u * phiy).sum() * area)
            gstar = fidelity_conjugate(psi, params.p, params.q, params.lam, g, area)
            fy_fid = (fidelity(ScalarField(grid, g - Ku), params) + gstar
                      - float((Ku * psi).sum() * area))
            r = Kpsi - div_arrays(phix, phiy, h)
            r_norm = float(np.sqrt((r ** 2).sum() * area))
            u_scale = max(float(np.sqrt((u ** 2).sum() * area)), f_norm)
            gap_abs = max(fy_tv, 0.0) + max(fy_fid, 0.0) + r_norm * u_scale
            gap_rel = gap_abs / max(energy_now, 1e-30) if gap_abs > 0 else 0.0
            gap_trace.append(gap_rel)
            if gap_rel <= config.gap_tol:
                converged = True
                break

    if converged:
        u_final = u
    else:
        u_final = best_u
    Ku_final = convolve_arrays(kernel, u_final)
    final_energy = primal_energy(u_final, Ku_final)
    if not energy_trace or energy_trace[-1] != final_energy:
        energy_trace.append(final_energy)

    u_field = ScalarField(grid, u_final)
    v_field = ScalarField(grid, f.values - u_final)
    return SolveResult(u=u_field, v=v_field, energy_trace=energy_trace,
                       gap_trace=gap_trace, iterations=iterations,
                       converged=converged)
