"""Prox-table checks: every map must satisfy its defining minimization.

The reference values come from a scalar golden-section minimizer (see
selftest.check_prox_correctness, used by both pytest and the CLI
selftest); the tests here cover the pieces individually and the edge
cases around the water-filling clamp.
"""

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from kerneltv.prox import (clamp_level_l1sq, make_fidelity_dual_prox,
                           proj_group_l1_ball, proj_unit_ball)
from kerneltv.selftest import check_prox_correctness


def test_prox_table_vs_golden_section():
    item = check_prox_correctness(seed=3)
    assert item.passed, f"prox defect {item.measured:.3e} > {item.tolerance}"


def test_unit_ball_projection():
    rng = np.random.default_rng(0)
    wx, wy = 3 * rng.standard_normal((2, 5, 5))
    px, py = proj_unit_ball(wx, wy)
    mag = np.hypot(px, py)
    assert np.all(mag <= 1.0 + 1e-15)
    inside = np.hypot(wx, wy) <= 1.0
    assert np.allclose(px[inside], wx[inside])
    # direction preserved
    cross = wx * py - wy * px
    assert np.allclose(cross, 0.0, atol=1e-12)


def test_clamp_level_zero_input():
    assert clamp_level_l1sq(np.zeros(10), 2.0, 0.5, 0.01) == 0.0


def test_clamp_level_root_property():
    # m* solves m/(2 lam) = (h^2/sigma) * sum (|z| - m)_+
    rng = np.random.default_rng(1)
    z = rng.standard_normal(50) * 3
    lam, sigma, area = 0.7, 1.3, 0.04
    m = clamp_level_l1sq(np.abs(z), lam, sigma, area)
    lhs = m / (2 * lam)
    rhs = (area / sigma) * np.maximum(np.abs(z) - m, 0).sum()
    assert lhs == pytest.approx(rhs, rel=1e-10)


def test_l1sq_prox_matches_brute_force_objective():
    rng = np.random.default_rng(2)
    lam, sigma, area = 1.1, 0.8, 0.0625
    g = rng.standard_normal(30)
    y = 2.5 * rng.standard_normal(30)
    prox = make_fidelity_dual_prox(1, 2, lam, g, area)
    psi = prox(y, sigma)

    def objective(m):
        cand = np.clip(y - sigma * g, -m, m)
        return (float((g * cand).sum() * area)
                + float(np.abs(cand).max() ** 2) / (4 * lam)
                + float(((cand - y) ** 2).sum() * area) / (2 * sigma))

    res = minimize_scalar(objective, bounds=(0, np.abs(y - sigma * g).max() + 1),
                          method="bounded", options={"xatol": 1e-12})
    assert objective(float(np.abs(psi).max())) <= res.fun + 1e-10


def test_group_l1_ball_projection():
    rng = np.random.default_rng(3)
    area = 0.01
    wx, wy = rng.standard_normal((2, 12, 12))
    radius = 0.4
    px, py = proj_group_l1_ball(wx, wy, radius, area)
    assert np.hypot(px, py).sum() * area <= radius * (1 + 1e-12)
    # projection is the closest point: check against cvxpy on a tiny case
    import cvxpy as cp

    wx2, wy2 = rng.standard_normal((2, 4, 4))
    qx = cp.Variable((4, 4))
    qy = cp.Variable((4, 4))
    objective = cp.Minimize(cp.sum_squares(qx - wx2) + cp.sum_squares(qy - wy2))
    constraint = [area * cp.sum(cp.norm(cp.vstack([cp.vec(qx, order="C"),
                                                   cp.vec(qy, order="C")]),
                                        axis=0)) <= radius]
    cp.Problem(objective, constraint).solve(solver=cp.CLARABEL)
    px2, py2 = proj_group_l1_ball(wx2, wy2, radius, area)
    assert np.allclose(px2, qx.value, atol=1e-6)
    assert np.allclose(py2, qy.value, atol=1e-6)


def test_group_ball_inside_untouched():
    wx = np.full((4, 4), 0.01)
    wy = np.zeros((4, 4))
    px, py = proj_group_l1_ball(wx, wy, 10.0, 1.0)
    assert np.array_equal(px, wx)
    assert np.array_equal(py, wy)
