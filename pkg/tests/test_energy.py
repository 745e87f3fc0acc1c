import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kerneltv.energy import (ProblemParams, compute_dual_field, energy,
                             minimality_probe, smoothed_residual)
from kerneltv.errors import DegenerateFidelity
from kerneltv.grid import GridSpec, ScalarField, bv_seminorm, inner, lp_norm
from kerneltv.kernels import GAUSSIAN, KernelSpec
from kerneltv.synth import disk, square


GRID = GridSpec(24, 24, 2.0 / 24)


class TestProblemParams:
    def test_rejects_unsupported_exponents(self):
        with pytest.raises(ValueError):
            ProblemParams(p=3, q=1)

    def test_rejects_bad_lambda(self):
        with pytest.raises(ValueError):
            ProblemParams(lam=0.0)
        with pytest.raises(ValueError):
            ProblemParams(lam=np.inf)


class TestEnergy:
    def test_u_equals_f_leaves_only_tv(self):
        rng = np.random.default_rng(0)
        f = ScalarField(GRID, rng.standard_normal(GRID.shape))
        params = ProblemParams(p=1, q=1, lam=3.0, kernel=KernelSpec(GAUSSIAN, 0.01))
        assert energy(f, f, params) == pytest.approx(bv_seminorm(f))

    def test_zero_u_identity_kernel_l1(self):
        rng = np.random.default_rng(1)
        f = ScalarField(GRID, rng.standard_normal(GRID.shape))
        params = ProblemParams(p=1, q=1, lam=2.5)
        assert energy(f, ScalarField.zeros(GRID), params) == pytest.approx(
            2.5 * lp_norm(f, 1))

    def test_square_energy_comparison(self):
        # for a small enough square, erasing it beats keeping it; the
        # pixelized area deviates from side^2 by at most a perimeter ring
        # and the pixelized TV is the exact stencil value
        grid = GridSpec(64, 64, 2.0 / 64)
        h = grid.h
        params = ProblemParams(p=1, q=1, lam=1.0)
        for side in (0.25, 0.5, 1.0):
            f = square(grid, side)
            e_zero = energy(f, ScalarField.zeros(grid), params)
            e_keep = energy(f, f, params)
            assert abs(e_zero - side ** 2) <= 4 * side * h + 4 * h * h
            cells = round(np.sqrt(f.values.sum()))
            assert e_keep == pytest.approx(
                4 * cells * h + (np.sqrt(2) - 2) * h, rel=1e-12)
            if 4 * side < side ** 2 - 4 * side * h:
                assert e_keep < e_zero
            if 4 * side > side ** 2 + 4 * side * h:
                assert e_zero < e_keep


class TestDualField:
    def _random_pair(self, seed):
        rng = np.random.default_rng(seed)
        f = ScalarField(GRID, rng.standard_normal(GRID.shape))
        u = ScalarField(GRID, rng.standard_normal(GRID.shape))
        return f, u

    def test_reduction_11_is_sign(self):
        f, u = self._random_pair(2)
        params = ProblemParams(p=1, q=1, lam=1.0)
        F = smoothed_residual(f, u, params)
        J = compute_dual_field(f, u, params)
        assert np.array_equal(J.values, np.sign(F.values))

    def test_reduction_22_is_twice_residual(self):
        f, u = self._random_pair(3)
        params = ProblemParams(p=2, q=2, lam=1.0)
        F = smoothed_residual(f, u, params)
        J = compute_dual_field(f, u, params)
        assert np.allclose(J.values, 2.0 * F.values, rtol=1e-14)

    def test_reduction_21_is_normalized_residual(self):
        f, u = self._random_pair(4)
        params = ProblemParams(p=2, q=1, lam=1.0)
        F = smoothed_residual(f, u, params)
        J = compute_dual_field(f, u, params)
        assert np.allclose(J.values, F.values / lp_norm(F, 2), rtol=1e-14)

    def test_reduction_12_is_scaled_sign(self):
        f, u = self._random_pair(5)
        params = ProblemParams(p=1, q=2, lam=1.0)
        F = smoothed_residual(f, u, params)
        J = compute_dual_field(f, u, params)
        assert np.allclose(J.values, 2.0 * np.sign(F.values) * lp_norm(F, 1),
                           rtol=1e-14)

    @given(seed=st.integers(0, 10_000),
           pq=st.sampled_from([(1, 1), (2, 2), (2, 1), (1, 2)]))
    @settings(max_examples=30, deadline=None)
    def test_pairing_identity(self, seed, pq):
        rng = np.random.default_rng(seed)
        p, q = pq
        f = ScalarField(GRID, rng.standard_normal(GRID.shape))
        u = ScalarField(GRID, rng.standard_normal(GRID.shape))
        params = ProblemParams(p=p, q=q, lam=1.7,
                               kernel=KernelSpec(GAUSSIAN, 0.02))
        F = smoothed_residual(f, u, params)
        J = compute_dual_field(f, u, params)
        assert inner(F, J) == pytest.approx(q * lp_norm(F, p) ** q, rel=1e-8)

    def test_degenerate_residual_raises(self):
        f = disk(GRID, 0.4)
        params = ProblemParams(p=1, q=1, lam=1.0)
        with pytest.raises(DegenerateFidelity):
            compute_dual_field(f, f, params)


class TestMinimalityProbe:
    def test_zero_direction_gives_zero(self):
        f = disk(GRID, 0.4)
        params = ProblemParams(p=2, q=2, lam=4.0)
        assert minimality_probe(f, ScalarField.zeros(GRID), params,
                                ScalarField.zeros(GRID), 1e-3) == 0.0

    def test_rejects_bad_eps(self):
        f = disk(GRID, 0.4)
        params = ProblemParams(p=2, q=2, lam=4.0)
        with pytest.raises(ValueError):
            minimality_probe(f, f, params, f, 0.5)

    def test_u_zero_optimal_below_threshold(self):
        # identity kernel, p=q=1: a small disk is erased, so u = 0 is a
        # minimizer and every probe direction is uphill
        grid = GridSpec(64, 64, 2.0 / 64)
        f = disk(grid, 0.15)
        params = ProblemParams(p=1, q=1, lam=5.0)  # lam * R = 0.75 < 2
        rng = np.random.default_rng(7)
        u0 = ScalarField.zeros(grid)
        from kerneltv.selftest import random_smooth_direction

        for _ in range(10):
            h = random_smooth_direction(grid, rng)
            for sign in (1.0, -1.0):
                signed = ScalarField(grid, sign * h.values)
                assert minimality_probe(f, u0, params, signed, 1e-3) >= -1e-14
