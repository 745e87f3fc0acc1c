"""Command-line interface.

Subcommands bind the library into reproducible runs:

  synthesize        write a disk/square/stripes/steps field file
  decompose         solve for (u, v) and write fields + summary JSON
  verify            optimality certificates for a (f, u) pair
  radial            annulus statistics and level clustering of a field
  threshold-sweep   r0(lam, t) estimates over a t ladder
  layer-cake        self-minimizer and superlevel fixed-point checks
  curvature         contour curvature bound check on a binary field
  stripe            the striped-texture construction and its verification
  oracle-compare    1D solver energies vs the brute-force oracle
  selftest          the numerical invariant suite

Exit codes: 0 success, 2 bad flags, 3 I/O failure, 4 non-convergence,
5 failed selftest assertion.  All randomness is seeded; reports are
bit-identical across reruns except for their timestamp field.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import fieldio, reports
from .energy import ProblemParams, energy
from .errors import KernelTVError, NonConvergence
from .grid import GridSpec, ScalarField, bv_seminorm, lp_norm
from .kernels import KernelSpec, canonical_family
from .layercake import layer_cake_check, self_fixed_point_check
from .optimality import verify_optimality
from .radial import radial_decompose
from .selftest import run_selftest
from .solver import SolverConfig, solve
from .stripe import stripe_case
from .synth import synthesize
from .thresholds import estimate_r0, monotonicity_sweep

EXIT_OK = 0
EXIT_BAD_FLAGS = 2
EXIT_IO = 3
EXIT_NONCONVERGENCE = 4
EXIT_SELFTEST = 5


def _parse_grid(text: str) -> tuple[int, int]:
    parts = text.lower().split("x")
    if len(parts) == 1:
        n = int(parts[0])
        return n, n
    if len(parts) == 2:
        return int(parts[0]), int(parts[1])
    raise ValueError(f"bad --grid {text!r}; use N or NXxNY")


def _parse_domain(text: str) -> float:
    """Extent of the torus in x; '-1,1' and '2' both mean extent 2."""
    if "," in text:
        lo, hi = (float(v) for v in text.split(","))
        if hi <= lo:
            raise ValueError(f"bad --domain {text!r}")
        return hi - lo
    extent = float(text)
    if extent <= 0:
        raise ValueError(f"bad --domain {text!r}")
    return extent


def make_grid(args) -> GridSpec:
    nx, ny = _parse_grid(args.grid)
    extent = _parse_domain(args.domain)
    return GridSpec(nx=nx, ny=ny, h=extent / nx)


def make_params(args) -> ProblemParams:
    kernel = KernelSpec(canonical_family(args.kernel), args.t)
    return ProblemParams(p=args.p, q=args.q, lam=args.lam, kernel=kernel)


def make_solver_config(args) -> SolverConfig:
    def step(text):
        return text if text == "auto" else float(text)

    return SolverConfig(max_iter=args.max_iter, gap_tol=args.gap_tol,
                        tau=step(args.tau), sigma=step(args.sigma),
                        theta=args.theta, seed=args.seed)


def _add_common(parser: argparse.ArgumentParser, solver: bool = True) -> None:
    parser.add_argument("--kernel", default="id", choices=["gauss", "poisson", "id"])
    parser.add_argument("--t", type=float, default=0.0, help="kernel scale")
    parser.add_argument("--p", type=int, default=1, choices=[1, 2])
    parser.add_argument("--q", type=int, default=1, choices=[1, 2])
    parser.add_argument("--lambda", dest="lam", type=float, default=1.0,
                        help="fidelity weight")
    parser.add_argument("--grid", default="256", help="N or NXxNY")
    parser.add_argument("--domain", default="-1,1",
                        help="'lo,hi' or extent of the torus in x")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--out", type=str, default=".", help="output directory")
    if solver:
        parser.add_argument("--max-iter", type=int, default=20000)
        parser.add_argument("--gap-tol", type=float, default=1e-6)
        parser.add_argument("--tau", default="auto")
        parser.add_argument("--sigma", default="auto")
        parser.add_argument("--theta", type=float, default=1.0)


def _config_dict(args) -> dict:
    skip = {"func"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kerneltv",
        description="kernel-smoothed cartoon-texture decomposition toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synthesize", help="write a synthetic field file")
    _add_common(p, solver=False)
    p.add_argument("--shape", required=True,
                   choices=["disk", "square", "stripes", "steps"])
    p.add_argument("--radius", type=float, default=0.5)
    p.add_argument("--side", type=float, default=0.5)
    p.add_argument("--amplitude", type=float, default=1.0)
    p.add_argument("--period", type=float, default=2.0)
    p.add_argument("--levels", type=str, default="0,1",
                   help="comma list for --shape steps")
    p.add_argument("--pgm", action="store_true", help="also write a PGM preview")
    p.add_argument("output", type=str)
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("decompose", help="solve for u and v = f - u")
    _add_common(p)
    p.add_argument("input", type=str, help="field file for f")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("verify", help="optimality certificates for (f, u)")
    _add_common(p)
    p.add_argument("input_f", type=str)
    p.add_argument("input_u", type=str)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("radial", help="annulus statistics + level clustering")
    _add_common(p, solver=False)
    p.add_argument("--nbins", type=int, default=32)
    p.add_argument("input", type=str, help="field file for u")
    p.set_defaults(func=cmd_radial)

    p = sub.add_parser("threshold-sweep", help="r0 estimates over a t ladder")
    _add_common(p)
    p.add_argument("--t-list", type=str, default="0.0",
                   help="comma list of kernel scales")
    p.add_argument("--bracket", type=str, default=None,
                   help="lo,hi initial radius bracket (default 0.8/lam,4/lam)")
    p.set_defaults(func=cmd_threshold_sweep)

    p = sub.add_parser("layer-cake", help="fixed-point checks on superlevels")
    _add_common(p)
    p.add_argument("--levels", type=str, default=None,
                   help="comma list of thresholds (default: interior quantiles)")
    p.add_argument("input", type=str, help="field file for u")
    p.set_defaults(func=cmd_layer_cake)

    p = sub.add_parser("curvature", help="contour curvature bound check")
    _add_common(p, solver=False)
    p.add_argument("--level", type=float, default=0.5)
    p.add_argument("--slack", type=float, default=1.1)
    p.add_argument("input", type=str, help="binary field file")
    p.set_defaults(func=cmd_curvature)

    p = sub.add_parser("stripe", help="striped-texture construction + verifier")
    _add_common(p)
    p.add_argument("--y0", type=float, default=0.0)
    p.add_argument("--yp0", type=float, default=0.0)
    p.add_argument("--slope-cap", type=float, default=900.0)
    p.add_argument("--assembly", default="band", choices=["band", "ramp"])
    p.set_defaults(func=cmd_stripe)

    p = sub.add_parser("oracle-compare", help="1D solver vs brute-force oracle")
    _add_common(p)
    p.add_argument("--n", type=int, default=32)
    p.add_argument("--cases", type=int, default=5, help="random signals per setup")
    p.set_defaults(func=cmd_oracle_compare)

    p = sub.add_parser("selftest", help="run the numerical invariant suite")
    _add_common(p, solver=False)
    p.set_defaults(func=cmd_selftest)

    return parser


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_synthesize(args) -> int:
    grid = make_grid(args)
    geometry: dict = {}
    if args.shape == "disk":
        geometry = {"radius": args.radius, "amplitude": args.amplitude}
    elif args.shape == "square":
        geometry = {"side": args.side, "amplitude": args.amplitude}
    elif args.shape == "stripes":
        geometry = {"period": args.period}
    else:
        geometry = {"levels": [float(v) for v in args.levels.split(",")]}
    field = synthesize(args.shape, grid, **geometry)
    fieldio.write_field(args.output, field)
    if args.pgm:
        fieldio.write_pgm(str(args.output) + ".pgm", field)
    print(f"wrote {args.output}")
    return EXIT_OK


def cmd_decompose(args) -> int:
    f = fieldio.read_field(args.input)
    params = make_params(args)
    config = make_solver_config(args)
    result = solve(f, params, config)
    out = _outdir(args)
    fieldio.write_field(out / "u.field", result.u)
    fieldio.write_field(out / "v.field", result.v)
    reports.write_csv(out / "energy_trace.csv", ["check", "energy"],
                      list(enumerate(result.energy_trace)))
    summary = {
        "energy": result.energy,
        "bv_u": bv_seminorm(result.u),
        "iterations": result.iterations,
        "converged": result.converged,
        "final_gap": result.gap_trace[-1] if result.gap_trace else None,
        "u_mean": result.u.mean(),
        "v_l1": lp_norm(result.v, 1),
    }
    reports.write_report(out / "decompose.json", "decompose",
                         _config_dict(args), summary)
    if not result.converged:
        print(f"decompose: gap {summary['final_gap']:.3e} above tolerance "
              f"after {result.iterations} iterations", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    return EXIT_OK


def cmd_verify(args) -> int:
    f = fieldio.read_field(args.input_f)
    u = fieldio.read_field(args.input_u)
    params = make_params(args)
    config = make_solver_config(args)
    report = verify_optimality(f, u, params, config)
    out = _outdir(args)
    reports.write_report(out / "optimality.json", "verify",
                         _config_dict(args), report.to_dict())
    print(f"residual_35={report.residual_35:.4g} residual_36={report.residual_36:.4g}")
    return EXIT_OK


def cmd_radial(args) -> int:
    u = fieldio.read_field(args.input)
    profile = radial_decompose(u, nbins=args.nbins)
    out = _outdir(args)
    results = {
        "center": list(profile.center),
        "bin_edges": profile.bin_edges,
        "bin_mean": profile.bin_mean,
        "bin_cv": profile.bin_cv,
        "levels": [vars(lv) for lv in profile.levels],
        "background_value": profile.background.value if profile.background else None,
        "coverage": profile.coverage,
        "max_cv": float(profile.bin_cv.max()) if profile.bin_cv.size else 0.0,
    }
    reports.write_report(out / "radial.json", "radial", _config_dict(args), results)
    reports.write_csv(out / "radial_profile.csv", ["r_outer", "mean", "cv"],
                      zip(profile.bin_edges[1:], profile.bin_mean, profile.bin_cv))
    return EXIT_OK


def cmd_threshold_sweep(args) -> int:
    params = make_params(args)
    grid = make_grid(args)
    config = make_solver_config(args)
    t_list = [float(v) for v in args.t_list.split(",")]
    if args.bracket:
        lo, hi = (float(v) for v in args.bracket.split(","))
    else:
        lo, hi = 0.8 / args.lam, 4.0 / args.lam
    if args.jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            estimates = list(pool.map(
                lambda t: estimate_r0(args.lam, t, params, grid, (lo, hi), config),
                t_list))
    else:
        estimates = monotonicity_sweep(args.lam, t_list, params, grid,
                                       (lo, hi), config)
    out = _outdir(args)
    results = {
        "estimates": [
            {"t": e.t, "r0": e.r0, "bracket": list(e.bracket),
             "lam_times_r0": args.lam * e.r0}
            for e in estimates
        ],
        "nondecreasing": all(
            b.r0 >= a.r0 - max(a.bracket_width, b.bracket_width)
            for a, b in zip(estimates, estimates[1:])
        ),
    }
    reports.write_report(out / "threshold_sweep.json", "threshold-sweep",
                         _config_dict(args), results)
    for idx, est in enumerate(estimates):
        reports.write_csv(out / f"decision_curve_{idx}.csv",
                          ["radius", "survival"], est.decision_curve)
    return EXIT_OK


def cmd_layer_cake(args) -> int:
    u = fieldio.read_field(args.input)
    params = make_params(args)
    config = make_solver_config(args)
    if args.levels:
        levels = [float(v) for v in args.levels.split(",")]
    else:
        span = float(u.values.max() - u.values.min())
        base = float(u.values.min())
        levels = [base + frac * span for frac in (0.25, 0.5, 0.75)]
    self_disc = self_fixed_point_check(u, params, config)
    checks = layer_cake_check(u, params, levels, config)
    out = _outdir(args)
    results = {
        "self_discrepancy": self_disc,
        "levels": [
            {"t": c.t, "cell_fraction": c.cell_fraction, "discrepancy": c.discrepancy}
            for c in checks
        ],
    }
    reports.write_report(out / "layer_cake.json", "layer-cake",
                         _config_dict(args), results)
    return EXIT_OK


def cmd_curvature(args) -> int:
    from .curvature import curvature_bound_check

    u = fieldio.read_field(args.input)
    params = make_params(args)
    report = curvature_bound_check(u, params, level=args.level, slack=args.slack)
    out = _outdir(args)
    results = {
        "bound": report.bound,
        "slack": report.slack,
        "fraction_within": report.fraction_within,
        "n_samples": report.n_samples,
        "n_contours": report.n_contours,
        "kappa_abs_median": report.kappa_abs_median,
        "kappa_abs_max": report.kappa_abs_max,
    }
    reports.write_report(out / "curvature.json", "curvature",
                         _config_dict(args), results)
    return EXIT_OK


def cmd_stripe(args) -> int:
    grid = make_grid(args)
    config = make_solver_config(args)
    case = stripe_case(grid, t=args.t, y0=args.y0, yp0=args.yp0,
                       family="gaussian" if args.kernel == "id" else
                       canonical_family(args.kernel),
                       slope_cap=args.slope_cap, assembly=args.assembly,
                       config=config)
    out = _outdir(args)
    results = {
        "lam_calibrated": case.lam,
        "calibration_residual": case.calibration_residual,
        "slope_max": case.slope_max,
        "report": case.report.to_dict(),
    }
    reports.write_report(out / "stripe.json", "stripe", _config_dict(args), results)
    reports.write_csv(out / "stripe_curves.csv", ["x", "lower", "upper"],
                      zip(case.x_centers, case.lower_curve, case.upper_curve))
    fieldio.write_field(out / "stripe_u.field", case.u)
    fieldio.write_field(out / "stripe_f.field", case.f)
    return EXIT_OK


def cmd_oracle_compare(args) -> int:
    from .oracle1d import oracle_1d

    rng = np.random.default_rng(args.seed)
    grid = GridSpec(nx=args.n, ny=1, h=_parse_domain(args.domain) / args.n)
    config = make_solver_config(args)
    rows = []
    worst = 0.0
    for case in range(args.cases):
        steps = rng.integers(2, 6)
        edges = np.sort(rng.choice(np.arange(1, args.n), size=steps, replace=False))
        sig = np.zeros(args.n)
        prev = 0
        for e, level in zip(list(edges) + [args.n], rng.normal(0, 1, steps + 1)):
            sig[prev:e] = level
            prev = e
        f = ScalarField(grid, sig[None, :])
        params = make_params(args)
        result = solve(f, params, config)
        _, e_oracle = oracle_1d(sig, grid.h, args.p, args.q, args.lam,
                                params.kernel.family, params.kernel.t)
        rel = abs(result.energy - e_oracle) / max(abs(e_oracle), 1e-30)
        worst = max(worst, rel)
        rows.append({"case": case, "solver_energy": result.energy,
                     "oracle_energy": e_oracle, "relative_gap": rel})
    out = _outdir(args)
    reports.write_report(out / "oracle_compare.json", "oracle-compare",
                         _config_dict(args), {"cases": rows, "worst": worst})
    print(f"worst relative energy gap: {worst:.3e}")
    return EXIT_OK


def cmd_selftest(args) -> int:
    items = run_selftest(args.seed)
    out = _outdir(args)
    results = {
        "items": [vars(item) for item in items],
        "all_passed": all(item.passed for item in items),
    }
    reports.write_report(out / "selftest.json", "selftest",
                         _config_dict(args), results)
    for item in items:
        status = "PASS" if item.passed else "FAIL"
        print(f"[{status}] {item.name}: measured {item.measured:.3e} "
              f"(tolerance {item.tolerance:.3e}) {item.detail}")
    if not results["all_passed"]:
        return EXIT_SELFTEST
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        params_probe = getattr(args, "lam", None)
        if params_probe is not None and hasattr(args, "p"):
            make_params(args)  # flag validation before any I/O
        if hasattr(args, "grid"):
            make_grid(args)
    except (ValueError, KernelTVError) as exc:
        print(f"bad flags: {exc}", file=sys.stderr)
        return EXIT_BAD_FLAGS
    try:
        return args.func(args)
    except NonConvergence as exc:
        print(f"non-convergence: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except (OSError, FileNotFoundError) as exc:
        print(f"I/O failure: {exc}", file=sys.stderr)
        return EXIT_IO
    except KernelTVError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_FLAGS


if __name__ == "__main__":
    sys.exit(main())
