import pytest

from kerneltv.energy import ProblemParams
from kerneltv.errors import BadBracket
from kerneltv.grid import GridSpec
from kerneltv.kernels import KernelSpec
from kerneltv.solver import SolverConfig
from kerneltv.thresholds import estimate_r0, monotonicity_sweep


PARAMS = ProblemParams(p=1, q=1, lam=1.0, kernel=KernelSpec())
FAST = SolverConfig(max_iter=2500, gap_tol=1e-5, check_every=50)


def test_bad_bracket_rejected():
    grid = GridSpec(64, 64, 2.0 / 64)
    with pytest.raises(BadBracket):
        estimate_r0(10.0, 0.0, PARAMS, grid, (0.4, 0.2))
    with pytest.raises(BadBracket):
        # both radii far above threshold: survival > 1/2 at both ends
        estimate_r0(10.0, 0.0, PARAMS, grid, (0.45, 0.7), FAST)


def test_chan_esedoglu_anchor_small_grid():
    grid = GridSpec(128, 128, 2.0 / 128)
    est = estimate_r0(10.0, 0.0, PARAMS, grid, (0.08, 0.4), FAST)
    assert abs(10.0 * est.r0 - 2.0) <= 0.2
    assert est.bracket[1] - est.bracket[0] <= grid.h
    # decision curve is monotone in R up to small noise
    curve = est.decision_curve
    for (r1, s1), (r2, s2) in zip(curve, curve[1:]):
        assert s2 >= s1 - 0.05
        assert 0.0 <= s1 <= 1.05


def test_duplicate_t_gives_identical_estimate():
    grid = GridSpec(64, 64, 2.0 / 64)
    a = estimate_r0(10.0, 0.004, PARAMS, grid, (0.1, 0.45), FAST)
    b = estimate_r0(10.0, 0.004, PARAMS, grid, (0.1, 0.45), FAST)
    assert a.r0 == b.r0  # fully deterministic pipeline


def test_sweep_nondecreasing():
    grid = GridSpec(96, 96, 2.0 / 96)
    ests = monotonicity_sweep(10.0, [0.002, 0.016], PARAMS, grid,
                              (0.1, 0.45), FAST)
    width = max(e.bracket_width for e in ests)
    assert ests[1].r0 >= ests[0].r0 - width


def test_sweep_rejects_unsorted_t():
    grid = GridSpec(64, 64, 2.0 / 64)
    with pytest.raises(ValueError):
        monotonicity_sweep(10.0, [0.01, 0.01], PARAMS, grid, (0.1, 0.4))
