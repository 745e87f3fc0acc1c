"""Dual-norm certificates of optimality.

A minimizer u (with u != f) is characterized by two identities on the
fidelity dual field J and g = K*J:

    lam * ||g||_*   = 1        (the texture dual norm of g)
    lam * <u, g>    = TV(u)

The verifier computes both sides; a genuine minimizer drives both
residuals toward zero, while perturbed candidates fail loudly.

Run:  python3 demos/03_optimality_certificates.py   (~1 minute)
"""

import numpy as np

from kerneltv import (GridSpec, KernelSpec, ProblemParams, ScalarField,
                      SolverConfig, solve, verify_optimality)
from kerneltv.synth import disk

grid = GridSpec(64, 64, 2.0 / 64)
f = disk(grid, 0.5)
params = ProblemParams(p=2, q=2, lam=8.0, kernel=KernelSpec("id"))

result = solve(f, params, SolverConfig(max_iter=20000, gap_tol=1e-6))
report = verify_optimality(f, result.u, params)
print("at the computed minimizer:")
print(f"  lam*||g||_* - 1      : {report.residual_35:+.5f}")
print(f"  pairing vs TV        : {report.residual_36:+.5f}")

shifted = ScalarField(grid, result.u.values + 0.3)
report_bad = verify_optimality(f, shifted, params)
print("at the minimizer shifted by a constant (not optimal):")
print(f"  lam*||g||_* - 1      : {report_bad.residual_35:+.5f}")
print(f"  pairing vs TV        : {report_bad.residual_36:+.5f}")
