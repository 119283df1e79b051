"""Maximum relative error of the approximate solutions over pure initial
states, as a function of eps, and the cubic-spline curves through it.

For each eps, every initial Bloch vector on the (Theta, Phi) mesh is
integrated with RK4 on the tau-mesh; at every mesh point the raw two-term,
normalized two-term and RWA vectors are compared against the numerical one
and only the running maxima are kept.
"""

from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .closed_form import nutate, rwa_rotate
from .core import SphericalAngles, bloch_from_angles
from .integrator import IntegrationError, mesh_size, rk4_step

CSV_HEADER = ("epsilon", "E_R", "E_RN", "E_R_RWA")
SPLINE_HEADER = ("epsilon", "E_R_spline", "E_RN_spline", "E_R_RWA_spline")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


@dataclass(frozen=True)
class SweepConfig:
    eps_min: float
    eps_max: float
    d_eps: float = 0.0025
    rabi_oscillations: int = 1
    dtau: float = 0.001
    theta_step: float = 0.1
    phi_step: float = 0.1

    def __post_init__(self):
        if not 0.0 < self.eps_min <= self.eps_max < 1.0:
            raise ValueError(f"need 0 < eps_min <= eps_max < 1, got [{self.eps_min}, {self.eps_max}]")
        for name in ("d_eps", "dtau", "theta_step", "phi_step"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if int(self.rabi_oscillations) != self.rabi_oscillations or self.rabi_oscillations < 1:
            raise ValueError("rabi_oscillations must be a positive integer")

    def eps_mesh(self) -> np.ndarray:
        """Uniform from eps_min; eps_max is appended if the step misses it."""
        n = int(math.floor((self.eps_max - self.eps_min) / self.d_eps + 1e-9))
        pts = [self.eps_min + k * self.d_eps for k in range(n + 1)]
        if self.eps_max - pts[-1] > 1e-9:
            pts.append(self.eps_max)
        return np.array(pts)

    def tau_max(self, eps: float) -> float:
        return self.rabi_oscillations * 2.0 * math.pi / eps

    @classmethod
    def full(cls, figure: str) -> "SweepConfig":
        lo, hi, n = FIGURES[figure]
        return cls(lo, hi, 0.0025, n, 0.001, 0.1, 0.1)

    @classmethod
    def desk(cls, figure: str) -> "SweepConfig":
        lo, hi, n = FIGURES[figure]
        return cls(lo, hi, 0.025, n, 0.005, 0.3, 0.3)


FIGURES = {"1a": (0.05, 0.25, 1), "1b": (0.02, 0.125, 10)}


def theta_phi_mesh(theta_step: float = 0.1, phi_step: float = 0.1) -> list[SphericalAngles]:
    """Interior grid ``(j*dTheta, k*dPhi)`` with ``0 < Theta < pi`` and
    ``0 <= Phi < 2pi``, Theta-major, followed by the two poles."""
    if not (theta_step > 0 and phi_step > 0):
        raise ValueError("mesh steps must be positive")
    thetas = []
    j = 1
    while j * theta_step < math.pi:
        thetas.append(j * theta_step)
        j += 1
    phis = []
    k = 0
    while k * phi_step < 2.0 * math.pi:
        phis.append(k * phi_step)
        k += 1
    mesh = [SphericalAngles(t, p) for t in thetas for p in phis]
    mesh.append(SphericalAngles(0.0, 0.0))
    mesh.append(SphericalAngles(math.pi, 0.0))
    return mesh


def initial_vectors(mesh) -> np.ndarray:
    return np.array([bloch_from_angles(a).as_array() for a in mesh])


@njit(cache=True)
def _max_errors(r0s, eps, dtau, tau_max, n_steps):
    """Running maxima over the tau-mesh of the three relative errors.

    Returns an ``(m, 3)`` array (raw two-term, normalized two-term, RWA) and
    the index of the first non-finite step, or -1.
    """
    m = r0s.shape[0]
    state = r0s.copy()
    out = np.zeros((m, 3))
    bad = -1
    for k in range(n_steps):
        tau = k * dtau
        h = dtau if k < n_steps - 1 else tau_max - tau
        t_new = tau_max if k == n_steps - 1 else (k + 1) * dtau
        s = eps * t_new
        cs, ss = math.cos(s), math.sin(s)
        ct, st = math.cos(t_new), math.sin(t_new)
        ch, sh = math.cos(0.5 * s), math.sin(0.5 * s)
        for i in range(m):
            x, y, z = rk4_step(tau, state[i, 0], state[i, 1], state[i, 2], eps, h)
            state[i, 0], state[i, 1], state[i, 2] = x, y, z
            n_num = math.sqrt(x * x + y * y + z * z)
            if not math.isfinite(n_num):
                if bad < 0:
                    bad = k
                continue
            rx, ry, rz = rwa_rotate(r0s[i, 0], r0s[i, 1], r0s[i, 2], cs, ss)
            mx, my, mz = nutate(rx, ry, rz, eps, ct, st, ch, sh)
            n_ms = math.sqrt(mx * mx + my * my + mz * mz)
            e_r = math.sqrt((x - mx) ** 2 + (y - my) ** 2 + (z - mz) ** 2) / n_num
            e_rn = math.sqrt((x - mx / n_ms) ** 2 + (y - my / n_ms) ** 2 + (z - mz / n_ms) ** 2) / n_num
            e_rwa = math.sqrt((x - rx) ** 2 + (y - ry) ** 2 + (z - rz) ** 2) / n_num
            if e_r > out[i, 0]:
                out[i, 0] = e_r
            if e_rn > out[i, 1]:
                out[i, 1] = e_rn
            if e_rwa > out[i, 2]:
                out[i, 2] = e_rwa
    return out, bad


def mesh_errors(r0s: np.ndarray, eps: float, rabi_oscillations: int, dtau: float) -> np.ndarray:
    """Per-initial-condition maxima, shape ``(m, 3)``."""
    tau_max = rabi_oscillations * 2.0 * math.pi / eps
    r0s = np.ascontiguousarray(r0s, dtype=float).reshape(-1, 3)
    out, bad = _max_errors(r0s, float(eps), float(dtau), tau_max, mesh_size(tau_max, dtau))
    if bad >= 0:
        raise IntegrationError(f"non-finite state at step {bad} (tau={bad * dtau:.6g}, eps={eps})")
    return out


def point_errors(angles: SphericalAngles, eps: float, cfg: SweepConfig) -> tuple[float, float, float]:
    """Maxima over the tau-mesh of ``(e_R, e_RN, e_RWA)`` for one initial state."""
    r0 = bloch_from_angles(angles).as_array()[None, :]
    e = mesh_errors(r0, eps, cfg.rabi_oscillations, cfg.dtau)[0]
    return float(e[0]), float(e[1]), float(e[2])


# ---------------------------------------------------------------- spline


class NotAKnotSpline:
    """C2 piecewise cubic through ``(xs, ys)`` whose third derivative is also
    continuous at the second and second-to-last knots."""

    def __init__(self, xs, ys):
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        if xs.ndim != 1 or xs.shape != ys.shape:
            raise ValueError("xs and ys must be 1-d and of equal length")
        n = len(xs)
        if n < 4:
            raise ValueError(f"need at least 4 knots, got {n}")
        h = np.diff(xs)
        if not np.all(h > 0):
            raise ValueError("xs must be strictly increasing")
        slope = np.diff(ys) / h
        # unknowns: second derivatives at the knots
        a = np.zeros((n, n))
        rhs = np.zeros(n)
        a[0, 0], a[0, 1], a[0, 2] = h[1], -(h[0] + h[1]), h[0]
        a[-1, -3], a[-1, -2], a[-1, -1] = h[-1], -(h[-2] + h[-1]), h[-2]
        for i in range(1, n - 1):
            a[i, i - 1] = h[i - 1]
            a[i, i] = 2.0 * (h[i - 1] + h[i])
            a[i, i + 1] = h[i]
            rhs[i] = 6.0 * (slope[i] - slope[i - 1])
        m = np.linalg.solve(a, rhs)
        self.x = xs
        self.y = ys
        self.m = m
        self._h = h

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        lo, hi = self.x[0], self.x[-1]
        slack = 1e-12 * max(1.0, abs(hi - lo))
        if np.any(x < lo - slack) or np.any(x > hi + slack):
            raise ValueError(f"evaluation outside knot range [{lo}, {hi}]")
        xc = np.clip(x, lo, hi)
        i = np.clip(np.searchsorted(self.x, xc, side="right") - 1, 0, len(self.x) - 2)
        h = self._h[i]
        t1 = self.x[i + 1] - xc
        t0 = xc - self.x[i]
        m0, m1 = self.m[i], self.m[i + 1]
        y0, y1 = self.y[i], self.y[i + 1]
        val = (
            m0 * t1**3 / (6 * h)
            + m1 * t0**3 / (6 * h)
            + (y0 / h - m0 * h / 6) * t1
            + (y1 / h - m1 * h / 6) * t0
        )
        return val if val.ndim else float(val)

    def third_derivative(self) -> np.ndarray:
        """Constant third derivative on each interval."""
        return np.diff(self.m) / self._h


def spline_not_a_knot(xs, ys) -> NotAKnotSpline:
    return NotAKnotSpline(xs, ys)


# ---------------------------------------------------------------- curves


@dataclass
class ErrorCurve:
    eps_values: np.ndarray
    E_R: np.ndarray
    E_RN: np.ndarray
    E_R_RWA: np.ndarray
    splines: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        for name in ("eps_values", "E_R", "E_RN", "E_R_RWA"):
            setattr(self, name, np.asarray(getattr(self, name), dtype=float))
        n = len(self.eps_values)
        if not all(len(getattr(self, c)) == n for c in ("E_R", "E_RN", "E_R_RWA")):
            raise ValueError("error lists differ in length")
        if n >= 4 and not self.splines:
            self.splines = {c: NotAKnotSpline(self.eps_values, getattr(self, c)) for c in ("E_R", "E_RN", "E_R_RWA")}

    def at(self, curve: str, eps):
        """Spline value of ``curve`` at ``eps`` (inside the knot range only)."""
        return self.splines[curve](eps)

    def rows(self):
        return zip(self.eps_values, self.E_R, self.E_RN, self.E_R_RWA)

    def spline_samples(self, density: int = 10) -> np.ndarray:
        n = len(self.eps_values)
        xs = np.linspace(self.eps_values[0], self.eps_values[-1], density * (n - 1) + 1)
        return np.column_stack([xs] + [self.splines[c](xs) for c in ("E_R", "E_RN", "E_R_RWA")])

    def write_csv(self, path, spline_path=None, density: int = 10) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_HEADER)
            for row in self.rows():
                w.writerow([_fmt(v) for v in row])
        if spline_path is not None:
            with open(spline_path, "w", newline="", encoding="utf-8") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(SPLINE_HEADER)
                for row in self.spline_samples(density):
                    w.writerow([_fmt(v) for v in row])

    @classmethod
    def read_csv(cls, path) -> "ErrorCurve":
        with open(path, newline="", encoding="utf-8") as fh:
            r = csv.reader(fh)
            header = tuple(next(r))
            if header != CSV_HEADER:
                raise ValueError(f"unexpected header {header}")
            data = np.array([[float(v) for v in row] for row in r])
        return cls(data[:, 0], data[:, 1], data[:, 2], data[:, 3])


def _eps_work(args):
    r0s, eps, n, dtau = args
    return mesh_errors(r0s, eps, n, dtau).max(axis=0)


def default_workers() -> int:
    env = os.environ.get("RABI_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def error_curve(cfg: SweepConfig, workers: int | None = None, progress=None) -> ErrorCurve:
    """Maximum over the (Theta, Phi)- and tau-meshes of each relative error,
    for every eps on the eps-mesh.

    Work items are single eps values; max is exact in floating point, so the
    result does not depend on ``workers`` or on scheduling.
    """
    r0s = initial_vectors(theta_phi_mesh(cfg.theta_step, cfg.phi_step))
    eps_values = cfg.eps_mesh()
    jobs = [(r0s, float(e), cfg.rabi_oscillations, cfg.dtau) for e in eps_values]
    workers = default_workers() if workers is None else max(1, workers)
    if workers == 1:
        maxima = []
        for job in jobs:
            maxima.append(_eps_work(job))
            if progress is not None:
                progress(job[1], maxima[-1])
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            maxima = list(pool.map(_eps_work, jobs))
    maxima = np.array(maxima)
    return ErrorCurve(eps_values, maxima[:, 0], maxima[:, 1], maxima[:, 2])
