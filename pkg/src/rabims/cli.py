"""Command-line front end.

    rabims trajectory --preset ground --eps 0.25 --out runs/fig2 --svg
    rabims sweep --figure 1a --profile desk --out runs/fig1a --svg
    rabims verify --seed 42
    rabims criterion --omega1 3.2107e11 --omega0 2.953e5

Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 verification
failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from .closed_form import ms2_xyz, rwa_xyz
from .core import BlochVector, ModelParams, SphericalAngles, bloch_from_angles
from .integrator import IntegrationConfig, IntegrationError, integrate
from .svg import error_curve_svg, trajectory_svg
from .sweep import FIGURES, SweepConfig, error_curve
from .verify import report, run_checks

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_VERIFY = 0, 1, 2, 3

PRESETS = {"ground": (0.0, 0.0, -1.0), "superposition": (1.0, 0.0, 0.0)}
SOLUTIONS = ("exact", "rwa", "ms2", "ms2n")
TRAJ_HEADER = ("tau", "alpha10", "alpha20", "alpha30")
MAX_ROWS = 20000


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def read_trajectory_csv(path) -> tuple[np.ndarray, np.ndarray]:
    with open(path, newline="", encoding="utf-8") as fh:
        r = csv.reader(fh)
        if tuple(next(r)) != TRAJ_HEADER:
            raise ValueError(f"{path}: unexpected header")
        data = np.array([[float(v) for v in row] for row in r])
    return data[:, 0], data[:, 1:]


# ---------------------------------------------------------------- helpers


def _resolve_eps(args) -> float:
    dimensional = args.omega1 is not None or args.omega0 is not None
    if dimensional and args.eps is not None:
        raise UsageError("give either --eps or --omega1/--omega0, not both")
    if dimensional:
        if args.omega1 is None or args.omega0 is None:
            raise UsageError("--omega1 and --omega0 must be given together")
        if args.omega1 <= 0 or args.omega0 <= 0:
            raise UsageError("frequencies must be positive")
        return ModelParams.from_frequencies(args.omega1, args.omega0).epsilon
    if args.eps is None:
        raise UsageError("--eps (or --omega1/--omega0) is required")
    return args.eps


def _initial_vector(args) -> BlochVector:
    angles = args.theta is not None or args.phi is not None
    if angles and args.preset is not None:
        raise UsageError("--preset conflicts with --theta/--phi")
    if angles:
        if args.theta is None or args.phi is None:
            raise UsageError("--theta and --phi must be given together")
        try:
            return bloch_from_angles(SphericalAngles(args.theta, args.phi))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    preset = args.preset or "ground"
    if preset not in PRESETS:
        raise UsageError(f"unknown preset {preset!r}; choose from {sorted(PRESETS)}")
    return BlochVector(*PRESETS[preset])


# ---------------------------------------------------------------- commands


def cmd_trajectory(args) -> int:
    eps = _resolve_eps(args)
    if not 0.0 < eps < 1.0:
        raise UsageError(f"eps must lie in (0, 1), got {eps}")
    if args.oscillations <= 0:
        raise UsageError("--oscillations must be positive")
    if args.dtau <= 0:
        raise UsageError("--dtau must be positive")
    sols = [s.strip() for s in args.solutions.split(",") if s.strip()]
    bad = [s for s in sols if s not in SOLUTIONS]
    if bad or not sols:
        raise UsageError(f"unknown solutions {bad}; choose from {SOLUTIONS}")
    r0 = _initial_vector(args)

    tau_max = args.oscillations * 2.0 * math.pi / eps
    probe = IntegrationConfig(tau_max, args.dtau)
    stride = max(1, math.ceil(probe.n_steps / (MAX_ROWS - 2)))
    exact = integrate(r0, eps, IntegrationConfig(tau_max, args.dtau, stride))
    taus = exact.taus

    a = r0.as_array()
    rwa = np.array([rwa_xyz(a[0], a[1], a[2], eps, t) for t in taus])
    ms2 = np.array([ms2_xyz(a[0], a[1], a[2], eps, t) for t in taus])
    data = {
        "exact": exact.points,
        "rwa": rwa,
        "ms2": ms2,
        "ms2n": ms2 / np.linalg.norm(ms2, axis=1, keepdims=True),
    }
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    written = {}
    for s in sols:
        path = out / f"{s}.csv"
        _write_csv(path, TRAJ_HEADER, (np.concatenate(([t], p)) for t, p in zip(taus, data[s])))
        written[s] = (taus, data[s])
        print(f"wrote {path} ({len(taus)} rows)")
    if args.svg:
        path = out / "trajectory.svg"
        path.write_text(trajectory_svg(written, eps), encoding="utf-8")
        print(f"wrote {path}")
    return EXIT_OK


def _sweep_config(args) -> SweepConfig:
    explicit = [args.eps_min, args.eps_max, args.oscillations]
    if args.figure is not None and any(v is not None for v in explicit):
        raise UsageError("--figure conflicts with --eps-min/--eps-max/--oscillations")
    if args.figure is not None:
        if args.figure not in FIGURES:
            raise UsageError(f"unknown figure {args.figure!r}")
        lo, hi, n = FIGURES[args.figure]
    else:
        if args.eps_min is None or args.eps_max is None:
            raise UsageError("give --figure or both --eps-min and --eps-max")
        lo, hi, n = args.eps_min, args.eps_max, args.oscillations or 1
    if args.profile == "full":
        base = dict(d_eps=0.0025, dtau=0.001, theta_step=0.1, phi_step=0.1)
    elif args.profile == "desk":
        base = dict(d_eps=0.025, dtau=0.005, theta_step=0.3, phi_step=0.3)
    else:
        raise UsageError(f"unknown profile {args.profile!r}")
    if args.d_eps is not None:
        base["d_eps"] = args.d_eps
    try:
        cfg = SweepConfig(lo, hi, rabi_oscillations=n, **base)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if len(cfg.eps_mesh()) < 4:
        raise UsageError("the eps-mesh needs at least 4 points for the spline; shrink --d-eps")
    return cfg


def cmd_sweep(args) -> int:
    cfg = _sweep_config(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    def progress(eps, m):
        print(f"eps={eps:.4f}  E_R={m[0]:.5f}  E_RN={m[1]:.5f}  E_R_RWA={m[2]:.5f}", flush=True)

    curve = error_curve(cfg, workers=args.workers, progress=progress)
    tag = args.figure or "custom"
    errors_path = out / "errors.csv"
    spline_path = out / "errors_spline.csv"
    curve.write_csv(errors_path, spline_path)
    print(f"wrote {errors_path} and {spline_path}")
    if args.svg:
        title = f"max relative error, {cfg.rabi_oscillations} Rabi oscillation(s) [{tag}, {args.profile}]"
        path = out / "errors.svg"
        path.write_text(error_curve_svg(curve.spline_samples(), title), encoding="utf-8")
        print(f"wrote {path}")
    return EXIT_OK


def cmd_verify(args) -> int:
    results = run_checks(seed=args.seed, tolerance_scale=args.tolerance_scale)
    sys.stdout.write(report(results))
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


def _one_digit(x: float) -> str:
    return f"{x:.0e}"


def cmd_criterion(args) -> int:
    eps = _resolve_eps(args)
    if not eps > 0:
        raise UsageError("eps must be positive")
    bound = 4.0 * eps
    print(f"epsilon            = {eps:.6e}  (~ {_one_digit(eps)})")
    print(f"RWA deviation bound = 4*epsilon = {bound:.6e}  (~ {_one_digit(bound)})")
    print(
        f"The RWA populations and coherences differ from the two-term solution by at most "
        f"{bound:.2g} (coherence |rho12| by at most {2 * eps:.2g})."
    )
    if eps >= 1.0:
        print("warning: epsilon >= 1, the perturbative picture does not apply")
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="rabims", description=__doc__.split("\n\n")[0])
    p.add_argument("--config", help="JSON file with flag values; explicit flags override it")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    t = sub.add_parser("trajectory", help="exact / RWA / two-term trajectories as CSV")
    t.add_argument("--eps", type=float)
    t.add_argument("--omega1", type=float, help="field angular frequency (rad/s)")
    t.add_argument("--omega0", type=float, help="Rabi angular frequency (rad/s)")
    t.add_argument("--theta", type=float)
    t.add_argument("--phi", type=float)
    t.add_argument("--preset", help="ground | superposition")
    t.add_argument("--oscillations", type=float, default=1.0)
    t.add_argument("--solutions", default="exact,rwa,ms2,ms2n")
    t.add_argument("--dtau", type=float, default=0.001)
    t.add_argument("--out", default=".")
    t.add_argument("--svg", action="store_true")
    t.set_defaults(func=cmd_trajectory)

    s = sub.add_parser("sweep", help="maximum-relative-error curves")
    s.add_argument("--figure", help="1a | 1b")
    s.add_argument("--eps-min", type=float)
    s.add_argument("--eps-max", type=float)
    s.add_argument("--oscillations", type=int)
    s.add_argument("--d-eps", type=float)
    s.add_argument("--profile", default="desk", help="desk | full")
    s.add_argument("--workers", type=int, help="parallel workers (default: RABI_THREADS or cpu count)")
    s.add_argument("--out", default=".")
    s.add_argument("--svg", action="store_true")
    s.set_defaults(func=cmd_sweep)

    v = sub.add_parser("verify", help="run the cross-module consistency checks")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--tolerance-scale", type=float, default=1.0, help=argparse.SUPPRESS)
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("criterion", help="RWA accuracy bound for given frequencies")
    c.add_argument("--eps", type=float)
    c.add_argument("--omega1", type=float, help="field angular frequency (rad/s)")
    c.add_argument("--omega0", type=float, help="Rabi angular frequency (rad/s)")
    c.set_defaults(func=cmd_criterion)
    return p


def _apply_config(parser, argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return parser.parse_args(argv)
    try:
        with open(known.config, encoding="utf-8") as fh:
            values = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {known.config}: {exc}") from None
    if not isinstance(values, dict):
        raise UsageError("config file must hold a JSON object")
    values = {k.replace("-", "_"): v for k, v in values.items()}
    values.pop("command", None)
    sub = parser._subparsers._group_actions[0]
    for child in sub.choices.values():
        dests = {a.dest for a in child._actions}
        child.set_defaults(**{k: v for k, v in values.items() if k in dests})
    return parser.parse_args(argv)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
        return args.func(args)
    except UsageError as exc:
        print(f"rabims: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except IntegrationError as exc:
        print(f"rabims: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
