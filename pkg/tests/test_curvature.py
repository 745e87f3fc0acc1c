import numpy as np
import pytest

from kerneltv.curvature import (curvature_bound_check, default_spacing,
                                extract_contours, polyline_curvatures)
from kerneltv.energy import ProblemParams
from kerneltv.errors import EmptyMask, NoContour
from kerneltv.grid import GridSpec, ScalarField
from kerneltv.kernels import KernelSpec
from kerneltv.optimality import curvature_residual
from kerneltv.synth import disk, square


def test_estimator_validated_on_exact_disks():
    grid = GridSpec(256, 256, 2.0 / 256)
    for R in (0.3, 0.5):
        contours = extract_contours(disk(grid, R), 0.5)
        assert len(contours) == 1
        xy = contours[0]
        kappa = polyline_curvatures(xy, default_spacing(xy, grid.h))
        assert np.all(np.abs(np.abs(kappa) - 1.0 / R) <= 0.10 / R)
        # convex contour: consistent sign
        assert np.all(np.sign(kappa) == np.sign(kappa[0]))


def test_disk_within_bound():
    grid = GridSpec(256, 256, 2.0 / 256)
    params = ProblemParams(p=1, q=1, lam=10.0, kernel=KernelSpec())
    report = curvature_bound_check(disk(grid, 0.3), params)
    assert report.bound == pytest.approx(10.0, rel=1e-9)  # ||K||_1 = 1
    assert report.fraction_within == 1.0
    assert report.kappa_abs_median == pytest.approx(1 / 0.3, rel=0.1)


def test_square_corners_violate_any_bound():
    # corner curvature diverges as h -> 0, so a square (not a minimizer)
    # fails bounds that a disk of the same scale satisfies
    params = ProblemParams(p=1, q=1, lam=3.0, kernel=KernelSpec())
    fractions = []
    for n in (128, 256):
        grid = GridSpec(n, n, 2.0 / n)
        report = curvature_bound_check(square(grid, 0.6), params)
        fractions.append(report.fraction_within)
        assert report.kappa_abs_max > report.slack * report.bound
    assert min(fractions) < 0.95


def test_no_contour_raises():
    grid = GridSpec(64, 64, 2.0 / 64)
    params = ProblemParams(p=1, q=1, lam=1.0)
    with pytest.raises(NoContour):
        curvature_bound_check(ScalarField.zeros(grid), params)


class TestCurvatureResidual:
    def test_flat_minimizer_has_empty_mask(self):
        # a (piecewise-)constant u resolves no gradient anywhere, so the
        # curvature equation has no domain to be checked on
        grid = GridSpec(64, 64, 2.0 / 64)
        params = ProblemParams(p=1, q=1, lam=10.0)
        f = disk(grid, 0.3)
        u = ScalarField.full(grid, 0.2)
        with pytest.raises(EmptyMask):
            curvature_residual(f, u, params)

    def test_odd_symmetry_is_exact(self):
        grid = GridSpec(48, 48, 2.0 / 48)
        rng = np.random.default_rng(0)
        from kerneltv.kernels import GAUSSIAN, convolve, get_kernel

        kern = get_kernel(KernelSpec(GAUSSIAN, 0.02), grid)
        f = convolve(kern, ScalarField(grid, rng.standard_normal(grid.shape)))
        u = convolve(kern, ScalarField(grid, rng.standard_normal(grid.shape)))
        params = ProblemParams(p=1, q=1, lam=2.0, kernel=KernelSpec(GAUSSIAN, 0.01))
        res = curvature_residual(f, u, params)
        f_neg = ScalarField(grid, -f.values)
        u_neg = ScalarField(grid, -u.values)
        res_neg = curvature_residual(f_neg, u_neg, params)
        assert np.array_equal(res.mask, res_neg.mask)
        assert np.array_equal(res_neg.field.values, -res.field.values)
