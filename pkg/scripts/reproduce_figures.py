"""Recompute the maximum-relative-error curves and write CSV + SVG.

    python3 scripts/reproduce_figures.py --figure 1a
    python3 scripts/reproduce_figures.py --figure 1b --profile full --out runs/1b

The desk profile takes seconds; the full profile (fine meshes) takes hours
on one core.  Set RABI_THREADS to spread eps values over processes.
"""

import argparse
import time
from pathlib import Path

from rabims.svg import error_curve_svg
from rabims.sweep import SweepConfig, error_curve

# spot values worth eyeballing for each figure: (curve, eps)
PROBES = {
    "1a": [("E_R", 0.25), ("E_RN", 0.25), ("E_R", 0.05), ("E_RN", 0.05), ("E_R_RWA", 0.10)],
    "1b": [("E_R", 0.125), ("E_RN", 0.033), ("E_R_RWA", 0.125)],
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--figure", choices=sorted(PROBES), default="1a")
    ap.add_argument("--profile", choices=("desk", "full"), default="desk")
    ap.add_argument("--workers", type=int, default=None)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    cfg = SweepConfig.full(args.figure) if args.profile == "full" else SweepConfig.desk(args.figure)
    out = Path(args.out or f"runs/fig{args.figure}_{args.profile}")
    out.mkdir(parents=True, exist_ok=True)
    print(cfg)

    t0 = time.perf_counter()
    curve = error_curve(
        cfg,
        workers=args.workers,
        progress=lambda e, m: print(f"  eps={e:.4f}  E_R={m[0]:.5f}  E_RN={m[1]:.5f}  E_R_RWA={m[2]:.5f}", flush=True),
    )
    print(f"sweep took {time.perf_counter() - t0:.1f} s")

    curve.write_csv(out / "errors.csv", out / "errors_spline.csv")
    title = f"max relative error, {cfg.rabi_oscillations} Rabi oscillation(s) [{args.figure}, {args.profile}]"
    (out / "errors.svg").write_text(error_curve_svg(curve.spline_samples(), title), encoding="utf-8")

    for name, eps in PROBES[args.figure]:
        print(f"{name}({eps}) = {curve.at(name, eps):.5f}")
    print(f"results in {out}/")


if __name__ == "__main__":
    main()
