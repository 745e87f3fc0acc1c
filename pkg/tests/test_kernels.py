import numpy as np
import pytest

from kerneltv.grid import GridSpec, ScalarField, lp_norm
from kerneltv.kernels import (GAUSSIAN, IDENTITY, POISSON, KernelSpec,
                              build_multiplier, canonical_family, convolve,
                              get_kernel, kernel_lp_norm, l1_smoothing_curve,
                              spatial_kernel)
from kerneltv.synth import disk


class TestKernelSpec:
    def test_aliases(self):
        assert canonical_family("gauss") == GAUSSIAN
        assert canonical_family("id") == IDENTITY
        assert canonical_family("Poisson") == POISSON

    def test_rejects_negative_scale(self):
        with pytest.raises(ValueError):
            KernelSpec(GAUSSIAN, -0.1)

    def test_zero_scale_is_identity(self):
        assert KernelSpec(GAUSSIAN, 0.0).is_identity
        assert KernelSpec(POISSON, 0.0).is_identity
        assert not KernelSpec(GAUSSIAN, 0.1).is_identity


class TestMultiplier:
    def test_identity_is_one(self):
        grid = GridSpec(16, 16, 0.25)
        kern = build_multiplier(KernelSpec(IDENTITY), grid)
        assert np.all(kern.multiplier == 1.0)

    def test_zero_frequency_is_one(self):
        grid = GridSpec(16, 16, 0.25)
        kern = build_multiplier(KernelSpec(GAUSSIAN, 0.7), grid)
        assert kern.multiplier[0, 0] == pytest.approx(1.0)

    def test_gaussian_value_at_unit_frequency(self):
        # |xi| = 1 exists for k = nx*h: with nx=8, h=0.25 take k=2
        grid = GridSpec(8, 8, 0.25)
        kern = build_multiplier(KernelSpec(GAUSSIAN, 1.0 / np.pi), grid)
        assert kern.multiplier[0, 2] == pytest.approx(np.exp(-1.0), rel=1e-12)

    def test_positive_and_bounded(self):
        grid = GridSpec(32, 32, 0.1)
        for family, t in ((GAUSSIAN, 0.3), (POISSON, 0.5)):
            kern = build_multiplier(KernelSpec(family, t), grid)
            assert np.all(kern.multiplier > 0.0)
            assert np.all(kern.multiplier <= 1.0)


class TestConvolve:
    def test_identity_returns_input(self):
        rng = np.random.default_rng(1)
        grid = GridSpec(16, 16, 0.25)
        u = ScalarField(grid, rng.standard_normal(grid.shape))
        out = convolve(get_kernel(KernelSpec(IDENTITY), grid), u)
        assert np.allclose(out.values, u.values, rtol=1e-12, atol=0)

    def test_constant_preserved(self):
        grid = GridSpec(16, 16, 0.25)
        u = ScalarField.full(grid, 4.2)
        out = convolve(get_kernel(KernelSpec(GAUSSIAN, 0.3), grid), u)
        assert np.allclose(out.values, 4.2, rtol=1e-12)

    def test_semigroup(self):
        rng = np.random.default_rng(2)
        grid = GridSpec(64, 64, 1.0 / 32)
        u = ScalarField(grid, rng.standard_normal(grid.shape))
        for family in (GAUSSIAN, POISSON):
            for s in (0.002, 0.004, 0.008):
                for t in (0.002, 0.004, 0.008):
                    two = convolve(get_kernel(KernelSpec(family, s), grid),
                                   convolve(get_kernel(KernelSpec(family, t), grid), u))
                    one = convolve(get_kernel(KernelSpec(family, s + t), grid), u)
                    diff = lp_norm(ScalarField(grid, two.values - one.values), 2)
                    assert diff <= 1e-10 * lp_norm(one, 2)

    def test_mass_preservation(self):
        rng = np.random.default_rng(3)
        grid = GridSpec(32, 32, 0.125)
        u = ScalarField(grid, rng.standard_normal(grid.shape) + 1.0)
        out = convolve(get_kernel(KernelSpec(GAUSSIAN, 0.05), grid), u)
        assert out.integral() == pytest.approx(u.integral(), rel=1e-12)

    def test_even_symmetry_preserved(self):
        # field even about the cell-center column/row stays even
        grid = GridSpec(32, 32, 0.125)
        rng = np.random.default_rng(4)
        half = rng.standard_normal((32, 17))
        vals = np.empty(grid.shape)
        vals[:, :17] = half
        vals[:, 17:] = half[:, 15:0:-1]
        vals = vals + vals[::-1, :]  # even in y about row 0 as well
        vals = 0.5 * (vals + np.roll(vals[::-1, :], 1, axis=0))
        u = ScalarField(grid, vals)
        out = convolve(get_kernel(KernelSpec(GAUSSIAN, 0.02), grid), u).values
        assert np.allclose(out, np.roll(out[::-1, :], 1, axis=0), atol=1e-12)
        assert np.allclose(out, np.roll(out[:, ::-1], 1, axis=1), atol=1e-12)

    def test_positivity(self):
        # scales chosen so the multiplier is negligible at the Nyquist
        # frequency; under-resolved scales ring at the truncation level
        grid = GridSpec(128, 128, 2.0 / 128)
        u = disk(grid, 0.3)
        for family, t in ((GAUSSIAN, 0.016), (GAUSSIAN, 0.05), (POISSON, 0.1)):
            out = convolve(get_kernel(KernelSpec(family, t), grid), u)
            assert out.values.min() >= -1e-12
        fine = GridSpec(256, 256, 2.0 / 256)
        out = convolve(get_kernel(KernelSpec(GAUSSIAN, 0.004), fine), disk(fine, 0.3))
        assert out.values.min() >= -1e-12

    def test_spatial_kernel_l1_is_one(self):
        grid = GridSpec(256, 256, 2.0 / 256)
        assert kernel_lp_norm(get_kernel(KernelSpec(GAUSSIAN, 0.004), grid), 1) \
            == pytest.approx(1.0, abs=1e-9)
        assert kernel_lp_norm(get_kernel(KernelSpec(IDENTITY), grid), 1) \
            == pytest.approx(1.0, rel=1e-12)

    def test_grid_mismatch_rejected(self):
        from kerneltv.errors import GridMismatch

        kern = get_kernel(KernelSpec(GAUSSIAN, 0.1), GridSpec(16, 16, 0.25))
        u = ScalarField.zeros(GridSpec(8, 8, 0.25))
        with pytest.raises(GridMismatch):
            convolve(kern, u)


class TestSmoothingCurve:
    def test_nonnegative_field_constant_curve(self):
        grid = GridSpec(128, 128, 2.0 / 128)
        f = disk(grid, 0.4)
        curve = l1_smoothing_curve(f, GAUSSIAN, [0.01, 0.04, 0.16])
        assert np.allclose(curve, f.integral(), rtol=1e-10)

    def test_dipole_decreases_toward_zero(self):
        grid = GridSpec(128, 128, 2.0 / 128)
        vals = (disk(grid, 0.25, center=(0.6, 1.0)).values
                - disk(grid, 0.25, center=(1.4, 1.0)).values)
        f = ScalarField(grid, vals)
        t_list = [0.01, 0.04, 0.16, 0.64, 2.56]
        curve = l1_smoothing_curve(f, GAUSSIAN, t_list)
        assert all(b <= a + 1e-12 for a, b in zip(curve, curve[1:]))
        assert curve[-1] < 0.2 * curve[0]

    def test_t_zero_gives_l1_norm(self):
        grid = GridSpec(32, 32, 0.125)
        rng = np.random.default_rng(5)
        f = ScalarField(grid, rng.standard_normal(grid.shape))
        assert l1_smoothing_curve(f, GAUSSIAN, [0.0]) == [lp_norm(f, 1)]

    def test_rejects_non_increasing(self):
        grid = GridSpec(32, 32, 0.125)
        f = ScalarField.zeros(grid)
        with pytest.raises(ValueError):
            l1_smoothing_curve(f, GAUSSIAN, [0.01, 0.01])
        with pytest.raises(ValueError):
            l1_smoothing_curve(f, GAUSSIAN, [-0.01, 0.01])
