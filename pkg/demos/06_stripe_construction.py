"""Hand-built candidates from prescribed level curves.

The +/-1 stripe pattern J drives the level-curve equation
y'' = U(x) (1 + y'^2)^(3/2) with U = lam*K*J; at the calibrated lam the
curves turn vertical at the stripe boundaries, so the construction runs
just below criticality (slope capped).  Assembling u between a curve and
its mirror image and setting f = u + J yields candidate pairs whose
optimality certificates can be evaluated directly -- and distinct
initial heights give distinct candidates with the same certificates,
the hallmark of the p = q = 1 non-uniqueness.

The pairing residual settles near 0.13 rather than zero: on a periodic
domain the identity lam*<u, K*J> = TV(u) picks up an integral of
cos(theta) along each level curve, and with the slope capped at 10^3
that defect cannot drop below E(m)/K(m) ~ 0.12 (complete elliptic
integrals).  The certificates still separate these candidates cleanly
from non-minimizers, whose residuals are O(1).

Run:  python3 demos/06_stripe_construction.py   (~3 minutes)
"""

from kerneltv import GridSpec, SolverConfig
from kerneltv.stripe import stripe_case

grid = GridSpec(128, 384, 4.0 / 128)
config = SolverConfig(max_iter=30000, gap_tol=3e-4, check_every=100,
                      step_balance=8.0)

for y0 in (0.0, 1.7):
    case = stripe_case(grid, t=1.5, y0=y0, slope_cap=900.0,
                       assembly="ramp", config=config)
    print(f"y0 = {y0}:")
    print(f"  calibrated lam        : {case.lam:.4f} "
          f"(|lam*||K*J||_* - 1| = {case.calibration_residual:.5f})")
    print(f"  dual-norm residual    : {case.report.residual_35:.5f}")
    print(f"  pairing residual      : {case.report.residual_36:.5f} "
          f"(torus floor ~0.12, see docstring)")
    print(f"  curve height swing    : "
          f"{case.lower_curve.max() - case.lower_curve.min():.2f}")
