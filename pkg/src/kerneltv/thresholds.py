"""Scale-threshold estimation for disk data.

For f the indicator of a disk of radius R, the solver keeps the disk
when R is large and erases it when R is small; the critical radius
r0(lam, t) is increasing in the kernel scale t and equals 2/lam at
t = 0.  Exact set membership is undecidable numerically, so the decision
rule is the survival ratio ||u||_1 / ||f||_1 crossing 1/2, located by
bisection on R.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .energy import ProblemParams
from .errors import BadBracket
from .grid import GridSpec, lp_norm
from .kernels import GAUSSIAN, IDENTITY, KernelSpec
from .solver import SolveResult, SolverConfig, solve
from .synth import disk


@dataclass
class ThresholdEstimate:
    lam: float
    t: float
    r0: float
    bracket: tuple[float, float]
    decision_curve: list[tuple[float, float]] = field(default_factory=list)

    @property
    def bracket_width(self) -> float:
        return self.bracket[1] - self.bracket[0]


def default_threshold_config() -> SolverConfig:
    # decisions only need the survival ratio on the right side of 1/2
    return SolverConfig(max_iter=4000, gap_tol=1e-5, check_every=50)


def _effective_params(lam: float, t: float, params: ProblemParams) -> ProblemParams:
    family = params.kernel.family if params.kernel.family != IDENTITY else GAUSSIAN
    return ProblemParams(p=params.p, q=params.q, lam=lam,
                         kernel=KernelSpec(family, t))


def survival_ratio(radius: float, params: ProblemParams, grid: GridSpec,
                   config: SolverConfig) -> tuple[float, SolveResult]:
    f = disk(grid, radius)
    result = solve(f, params, config)
    return lp_norm(result.u, 1) / lp_norm(f, 1), result


def estimate_r0(lam: float, t: float, params: ProblemParams, grid: GridSpec,
                bracket: tuple[float, float],
                config: SolverConfig | None = None,
                max_steps: int = 12) -> ThresholdEstimate:
    """Bisect the survival ratio across 1/2 to locate r0(lam, t).

    The initial bracket must satisfy survival(r_lo) < 1/2 < survival(r_hi);
    bisection runs at most max_steps times and stops early once the
    bracket is a fraction of a cell wide.
    """
    if config is None:
        config = default_threshold_config()
    run = _effective_params(lam, t, params)
    r_lo, r_hi = bracket
    if not (0 < r_lo < r_hi):
        raise BadBracket(f"bad bracket {bracket}")
    curve: list[tuple[float, float]] = []

    s_lo, _ = survival_ratio(r_lo, run, grid, config)
    s_hi, _ = survival_ratio(r_hi, run, grid, config)
    curve += [(r_lo, s_lo), (r_hi, s_hi)]
    if not (s_lo < 0.5 < s_hi):
        raise BadBracket(
            f"survival not bracketed: s({r_lo})={s_lo:.3f}, s({r_hi})={s_hi:.3f}"
        )
    for _ in range(max_steps):
        if r_hi - r_lo <= grid.h / 4.0:
            break
        mid = 0.5 * (r_lo + r_hi)
        s_mid, _ = survival_ratio(mid, run, grid, config)
        curve.append((mid, s_mid))
        if s_mid < 0.5:
            r_lo = mid
        else:
            r_hi = mid
    curve.sort(key=lambda pair: pair[0])
    return ThresholdEstimate(lam=lam, t=t, r0=0.5 * (r_lo + r_hi),
                             bracket=(r_lo, r_hi), decision_curve=curve)


def monotonicity_sweep(lam: float, t_list, params: ProblemParams, grid: GridSpec,
                       bracket: tuple[float, float],
                       config: SolverConfig | None = None) -> list[ThresholdEstimate]:
    """r0 estimates along a strictly increasing t grid.

    Each step reuses (and widens, as needed) the previous estimate's
    neighborhood as its bracket, since r0 is nondecreasing in t.
    """
    t_arr = list(t_list)
    if any(b <= a for a, b in zip(t_arr, t_arr[1:])):
        raise ValueError("t_list must be strictly increasing")
    estimates: list[ThresholdEstimate] = []
    lo, hi = bracket
    for t in t_arr:
        est = estimate_r0(lam, t, params, grid, (lo, hi), config)
        estimates.append(est)
        # r0 can only grow with t; keep a cushion below, stretch above
        lo = max(est.bracket[0] - 2 * grid.h, grid.h)
        hi = max(hi, min(est.r0 * 2.0, 0.45 * min(grid.extent)))
    return estimates
