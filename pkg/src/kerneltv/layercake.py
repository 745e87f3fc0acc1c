"""Self-minimizer and layer-cake fixed-point checks (q = 1 only).

With q = 1 a minimizer u for datum f is also a minimizer for datum u,
and each superlevel indicator of a nonnegative minimizer is itself a
minimizer.  Both statements turn into fixed-point probes: re-solve with
the candidate as its own datum and measure how far it moves in L1.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .energy import ProblemParams
from .grid import ScalarField, lp_norm, threshold
from .solver import SolverConfig, solve


def default_fixed_point_config() -> SolverConfig:
    # warm start at the candidate itself: we probe whether it moves
    return SolverConfig(max_iter=6000, gap_tol=1e-6, check_every=50, init="data")


def self_fixed_point_check(u: ScalarField, params: ProblemParams,
                           config: SolverConfig | None = None) -> float:
    """Relative L1 discrepancy between u and the minimizer for datum u."""
    if params.q != 1:
        raise ValueError("the self-minimizer property needs q = 1")
    if config is None:
        config = default_fixed_point_config()
    elif config.init != "data":
        config = replace(config, init="data")
    norm_u = lp_norm(u, 1)
    if norm_u == 0.0:
        return 0.0
    result = solve(u, params, config)
    diff = ScalarField(u.grid, result.u.values - u.values)
    return lp_norm(diff, 1) / norm_u


@dataclass
class LayerCheck:
    t: float
    cell_fraction: float
    discrepancy: float | None  # None when the level was skipped


def layer_cake_check(u: ScalarField, params: ProblemParams, t_levels,
                     config: SolverConfig | None = None) -> list[LayerCheck]:
    """Fixed-point discrepancies of the superlevel indicators of u.

    Levels whose indicator holds less than 1% or more than 99% of the
    cells are skipped (discrepancy None).
    """
    if params.q != 1:
        raise ValueError("the layer-cake property needs q = 1")
    out: list[LayerCheck] = []
    for t in t_levels:
        chi = threshold(u, float(t))
        frac = float(chi.values.mean())
        if frac < 0.01 or frac > 0.99:
            out.append(LayerCheck(t=float(t), cell_fraction=frac, discrepancy=None))
            continue
        disc = self_fixed_point_check(chi, params, config)
        out.append(LayerCheck(t=float(t), cell_fraction=frac, discrepancy=disc))
    return out
