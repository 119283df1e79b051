"""Ground and superposition starts at eps = 1/4 against RK4.

Prints the largest relative error of the raw and normalized two-term
solutions and of the RWA, and writes trajectory plots for both starts.
"""

import argparse
import math
from pathlib import Path

import numpy as np

from rabims.closed_form import ms2_xyz, rwa_xyz
from rabims.core import BlochVector
from rabims.integrator import IntegrationConfig, integrate
from rabims.svg import trajectory_svg
from rabims.sweep import mesh_errors

CASES = {
    "ground": ((0.0, 0.0, -1.0), 3),
    "superposition": ((1.0, 0.0, 0.0), 10),
}


def trajectories(r0, eps, n_osc, dtau, stride=20):
    tr = integrate(BlochVector(*r0), eps, IntegrationConfig(n_osc * 2 * math.pi / eps, dtau, stride))
    rwa = np.array([rwa_xyz(*r0, eps, t) for t in tr.taus])
    ms2 = np.array([ms2_xyz(*r0, eps, t) for t in tr.taus])
    return {
        "exact": (tr.taus, tr.points),
        "rwa": (tr.taus, rwa),
        "ms2": (tr.taus, ms2),
        "ms2n": (tr.taus, ms2 / np.linalg.norm(ms2, axis=1, keepdims=True)),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--eps", type=float, default=0.25)
    ap.add_argument("--dtau", type=float, default=0.001)
    ap.add_argument("--out", default="runs/special_cases")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    for name, (r0, n_osc) in CASES.items():
        e = mesh_errors(np.array([r0]), args.eps, n_osc, args.dtau)[0]
        print(f"{name:14s} {n_osc:2d} osc  ms2={e[0]:.4f}  ms2n={e[1]:.4f}  rwa={e[2]:.4f}")
        svg = trajectory_svg(trajectories(r0, args.eps, n_osc, args.dtau), args.eps)
        (out / f"{name}.svg").write_text(svg, encoding="utf-8")
    print(f"plots in {out}/")


if __name__ == "__main__":
    main()
