"""The numerical invariant suite.

Every check returns a SelfTestItem with its measured defect and the
tolerance it must meet; the CLI selftest command and the pytest suite
both run these.  The checks are desk-scale (seconds each):

  adjointness        <grad u, w> + <u, div w> = 0          (1e-12)
  semigroup          K_s * K_t = K_{s+t}                   (1e-10)
  mass               integral(K*u) = integral(u)           (1e-12)
  prox               prox outputs vs golden-section        (1e-8)
  star vs program    star norm vs convex-program oracle    (1e-4)
  dual pairing       <F, J> = q ||F||_p^q                  (1e-8)
  probe battery      E(u*+eps h) - E(u*) >= -1e-6 E(u*)
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .energy import (ProblemParams, compute_dual_field, energy,
                     minimality_probe, smoothed_residual)
from .gnorm import star_norm
from .grid import (GridSpec, ScalarField, VectorField, bv_seminorm, divergence,
                   gradient, inner, lp_norm, vector_inner)
from .kernels import (GAUSSIAN, POISSON, KernelSpec, convolve, get_kernel)
from .prox import clamp_level_l1sq, make_fidelity_dual_prox
from .solver import SolverConfig, solve
from .synth import disk


@dataclass
class SelfTestItem:
    name: str
    measured: float
    tolerance: float
    passed: bool
    detail: str = ""


def _item(name: str, measured: float, tolerance: float, detail: str = "",
          larger_ok: bool = False) -> SelfTestItem:
    passed = measured >= tolerance if larger_ok else measured <= tolerance
    return SelfTestItem(name, float(measured), tolerance, bool(passed), detail)


def check_adjointness(seed: int = 0) -> SelfTestItem:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for nx, ny, h in ((8, 8, 0.25), (8, 4, 1.0), (16, 8, 0.125)):
        grid = GridSpec(nx, ny, h)
        u = ScalarField(grid, rng.standard_normal(grid.shape))
        w = VectorField(grid, rng.standard_normal(grid.shape),
                        rng.standard_normal(grid.shape))
        lhs = vector_inner(gradient(u), w)
        rhs = inner(u, divergence(w))
        scale = max(abs(lhs), abs(rhs), 1e-30)
        worst = max(worst, abs(lhs + rhs) / scale)
    return _item("adjointness", worst, 1e-12)


def check_semigroup(seed: int = 0) -> SelfTestItem:
    rng = np.random.default_rng(seed)
    grid = GridSpec(64, 64, 1.0 / 32)
    u = ScalarField(grid, rng.standard_normal(grid.shape))
    worst = 0.0
    t0 = 0.004
    for family in (GAUSSIAN, POISSON):
        for s_fac in (0.5, 1.0, 2.0):
            for t_fac in (0.5, 1.0, 2.0):
                s, t = s_fac * t0, t_fac * t0
                ks = get_kernel(KernelSpec(family, s), grid)
                kt = get_kernel(KernelSpec(family, t), grid)
                kst = get_kernel(KernelSpec(family, s + t), grid)
                two = convolve(ks, convolve(kt, u))
                one = convolve(kst, u)
                num = lp_norm(ScalarField(grid, two.values - one.values), 2)
                worst = max(worst, num / max(lp_norm(one, 2), 1e-30))
    return _item("kernel_semigroup", worst, 1e-10)


def check_mass_preservation(seed: int = 0) -> SelfTestItem:
    rng = np.random.default_rng(seed)
    grid = GridSpec(48, 48, 1.0 / 24)
    u = ScalarField(grid, rng.standard_normal(grid.shape) + 2.0)
    worst = 0.0
    for family, t in ((GAUSSIAN, 0.01), (POISSON, 0.02), (GAUSSIAN, 0.0)):
        ku = convolve(get_kernel(KernelSpec(family, t), grid), u)
        worst = max(worst, abs(ku.integral() - u.integral())
                    / max(abs(u.integral()), 1e-30))
    return _item("mass_preservation", worst, 1e-12)


def _golden(fun, lo: float, hi: float) -> float:
    res = minimize_scalar(fun, bracket=None, bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-12})
    return float(res.x)


def check_prox_correctness(seed: int = 0) -> SelfTestItem:
    """Each prox in the table vs a scalar golden-section inner minimizer."""
    rng = np.random.default_rng(seed)
    n = 24
    area = 0.25 ** 2
    lam, sigma = 1.7, 0.6
    g = rng.standard_normal(n)
    y = 2.0 * rng.standard_normal(n)
    worst = 0.0

    def weighted_obj(psi, p, q):
        pairing = float((g * psi).sum() * area)
        if (p, q) == (1, 1):
            reg = 0.0 if np.all(np.abs(psi) <= lam + 1e-12) else np.inf
        elif (p, q) == (2, 2):
            reg = float((psi ** 2).sum() * area) / (4 * lam)
        elif (p, q) == (2, 1):
            reg = 0.0 if np.sqrt((psi ** 2).sum() * area) <= lam + 1e-12 else np.inf
        else:
            reg = float(np.abs(psi).max() ** 2) / (4 * lam)
        return pairing + reg + float(((psi - y) ** 2).sum() * area) / (2 * sigma)

    # The golden-section argmin is only sqrt(eps)-accurate, but near the
    # minimum the objective is quadratically flat, so the honest defect
    # measure is how much the prox output's objective EXCEEDS the
    # golden-section one (a correct prox may only do better).
    for (p, q) in ((1, 1), (2, 2)):
        prox = make_fidelity_dual_prox(p, q, lam, g, area)
        psi = prox(y, sigma)
        for c in range(n):  # separable: golden-section per cell
            def cell_obj(val):
                if (p, q) == (1, 1):
                    val = np.clip(val, -lam, lam)
                reg = 0.0 if q == 1 else val * val / (4 * lam)
                return g[c] * val + reg + (val - y[c]) ** 2 / (2 * sigma)
            span = lam if (p, q) == (1, 1) else abs(y[c]) + lam * abs(g[c]) + 10
            best = _golden(cell_obj, -span, span)
            worst = max(worst, cell_obj(psi[c]) - cell_obj(best))

    # (2,1): the prox lies on the ray through z = y - sigma*g
    prox = make_fidelity_dual_prox(2, 1, lam, g, area)
    psi = prox(y, sigma)
    z = y - sigma * g
    z_norm = np.sqrt((z ** 2).sum() * area)
    s_best = _golden(lambda s: weighted_obj(np.clip(s, 0, lam / z_norm) * z, 2, 1),
                     0.0, 1.0)
    psi_ref = np.clip(s_best, 0, lam / z_norm) * z
    worst = max(worst, weighted_obj(psi, 2, 1) - weighted_obj(psi_ref, 2, 1))

    # (1,2): golden-section over the clamp level
    prox = make_fidelity_dual_prox(1, 2, lam, g, area)
    psi = prox(y, sigma)
    z = y - sigma * g
    m_best = _golden(lambda m: weighted_obj(np.clip(z, -m, m), 1, 2),
                     0.0, float(np.abs(z).max()) + 1.0)
    worst = max(worst, weighted_obj(psi, 1, 2)
                - weighted_obj(np.clip(z, -m_best, m_best), 1, 2))
    return _item("prox_correctness", worst, 1e-8)


def star_norm_program_oracle(v: ScalarField) -> float:
    """Independent convex-program solution of min max|w| s.t. div w = v."""
    import cvxpy as cp

    grid = v.grid
    ny, nx, h = grid.ny, grid.nx, grid.h
    wx = cp.Variable((ny, nx))
    wy = cp.Variable((ny, nx))
    t = cp.Variable(nonneg=True)
    div = (wx - cp.hstack([wx[:, -1:], wx[:, :-1]])
           + wy - cp.vstack([wy[-1:, :], wy[:-1, :]])) / h
    constraints = [div == v.values]
    for i in range(ny):
        for j in range(nx):
            constraints.append(cp.SOC(t, cp.hstack([wx[i, j], wy[i, j]])))
    problem = cp.Problem(cp.Minimize(t), constraints)
    try:
        problem.solve(solver=cp.CLARABEL)
    except (cp.SolverError, Exception):
        problem.solve(solver=cp.ECOS)
    return float(t.value)


def check_star_norm_oracle(seed: int = 0) -> SelfTestItem:
    grid = GridSpec(8, 8, 0.25)
    worst = 0.0
    cases = []
    for (i, j, di, dj) in ((3, 3, 0, 1), (2, 5, 1, 0), (4, 2, 0, 1)):
        v = np.zeros(grid.shape)
        v[i, j] = 1.0
        v[(i + di) % 8, (j + dj) % 8] = -1.0
        cases.append(ScalarField(grid, v))
    config = SolverConfig(max_iter=60000, gap_tol=2e-6, check_every=50)
    for v in cases:
        mine = star_norm(v, config).value
        ref = star_norm_program_oracle(v)
        worst = max(worst, abs(mine - ref) / max(abs(ref), 1e-30))
    return _item("star_norm_vs_program", worst, 1e-4)


def check_dual_pairing(seed: int = 0) -> SelfTestItem:
    rng = np.random.default_rng(seed)
    grid = GridSpec(24, 24, 1.0 / 12)
    worst = 0.0
    for (p, q) in ((1, 1), (2, 2), (2, 1), (1, 2)):
        params = ProblemParams(p=p, q=q, lam=2.0, kernel=KernelSpec(GAUSSIAN, 0.01))
        f = ScalarField(grid, rng.standard_normal(grid.shape))
        u = ScalarField(grid, rng.standard_normal(grid.shape))
        F = smoothed_residual(f, u, params)
        J = compute_dual_field(f, u, params)
        lhs = inner(F, J)
        rhs = q * lp_norm(F, p) ** q
        worst = max(worst, abs(lhs - rhs) / max(abs(rhs), 1e-30))
    return _item("dual_pairing_identity", worst, 1e-8)


def random_smooth_direction(grid: GridSpec, rng) -> ScalarField:
    """Seeded low-pass noise normalized to unit total variation."""
    noise = ScalarField(grid, rng.standard_normal(grid.shape))
    smooth = convolve(get_kernel(KernelSpec(GAUSSIAN, 0.01), grid), noise)
    tv = bv_seminorm(smooth)
    return ScalarField(grid, smooth.values / max(tv, 1e-30))


def check_minimality_battery(seed: int = 0, n_probes: int = 20) -> SelfTestItem:
    rng = np.random.default_rng(seed)
    grid = GridSpec(48, 48, 1.0 / 24)
    f = disk(grid, 0.5)
    params = ProblemParams(p=2, q=2, lam=8.0, kernel=KernelSpec())
    result = solve(f, params, SolverConfig(max_iter=8000, gap_tol=1e-8))
    e0 = energy(f, result.u, params)
    worst = 0.0
    for _ in range(n_probes):
        hdir = random_smooth_direction(grid, rng)
        for sign in (1.0, -1.0):
            signed = ScalarField(grid, sign * hdir.values)
            delta = minimality_probe(f, result.u, params, signed, 1e-3)
            worst = min(worst, delta)
    return _item("minimality_probe_battery", worst, -1e-6 * e0, larger_ok=True,
                 detail=f"energy {e0:.6g}")


ALL_CHECKS = (
    check_adjointness,
    check_semigroup,
    check_mass_preservation,
    check_prox_correctness,
    check_star_norm_oracle,
    check_dual_pairing,
    check_minimality_battery,
)


def run_selftest(seed: int = 0) -> list[SelfTestItem]:
    return [check(seed) for check in ALL_CHECKS]
