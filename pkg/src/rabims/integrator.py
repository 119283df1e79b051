"""Reference ("exact") dynamics: fixed-step RK4 on the optical Bloch
equations, with an adaptive embedded pair as an audit of the RK4 error."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit
from scipy.integrate import solve_ivp

from .closed_form import Trajectory
from .core import BlochVector


class IntegrationError(RuntimeError):
    pass


@dataclass(frozen=True)
class IntegrationConfig:
    tau_max: float
    dtau: float = 0.001
    sample_stride: int = 1

    def __post_init__(self):
        if not self.dtau > 0:
            raise ValueError(f"dtau must be positive, got {self.dtau}")
        if not self.tau_max >= 0:
            raise ValueError(f"tau_max must be nonnegative, got {self.tau_max}")
        if int(self.sample_stride) != self.sample_stride or self.sample_stride < 1:
            raise ValueError(f"sample_stride must be a positive integer, got {self.sample_stride}")

    @property
    def n_steps(self) -> int:
        return mesh_size(self.tau_max, self.dtau)


def mesh_size(tau_max: float, dtau: float) -> int:
    """Number of RK4 steps to reach ``tau_max``; the last one may be short."""
    n = int(math.floor(tau_max / dtau))
    if tau_max - n * dtau > 1e-9 * dtau:
        n += 1
    return n


@njit(cache=True)
def _rhs(tau, x, y, z, eps):
    st, c1 = math.sin(tau), 1.0 + math.cos(tau)
    return eps * st * z, eps * c1 * z, -eps * (st * x + c1 * y)


@njit(cache=True)
def rk4_step(tau, x, y, z, eps, h):
    k1x, k1y, k1z = _rhs(tau, x, y, z, eps)
    hh = 0.5 * h
    k2x, k2y, k2z = _rhs(tau + hh, x + hh * k1x, y + hh * k1y, z + hh * k1z, eps)
    k3x, k3y, k3z = _rhs(tau + hh, x + hh * k2x, y + hh * k2y, z + hh * k2z, eps)
    k4x, k4y, k4z = _rhs(tau + h, x + h * k3x, y + h * k3y, z + h * k3z, eps)
    h6 = h / 6.0
    return (
        x + h6 * (k1x + 2.0 * (k2x + k3x) + k4x),
        y + h6 * (k1y + 2.0 * (k2y + k3y) + k4y),
        z + h6 * (k1z + 2.0 * (k2z + k3z) + k4z),
    )


@njit(cache=True)
def _run_sampled(r0, eps, dtau, tau_max, n_steps, stride, out_tau, out_r):
    """Integrate and store every ``stride``-th mesh point plus the last one.

    Returns ``(n_stored, bad_step)``; ``bad_step >= 0`` flags the first step
    that produced a non-finite state.
    """
    x, y, z = r0[0], r0[1], r0[2]
    out_tau[0] = 0.0
    out_r[0, 0], out_r[0, 1], out_r[0, 2] = x, y, z
    m = 1
    for k in range(n_steps):
        tau = k * dtau
        h = dtau if k < n_steps - 1 else tau_max - tau
        x, y, z = rk4_step(tau, x, y, z, eps, h)
        if not (math.isfinite(x) and math.isfinite(y) and math.isfinite(z)):
            return m, k
        if (k + 1) % stride == 0 or k == n_steps - 1:
            out_tau[m] = tau_max if k == n_steps - 1 else (k + 1) * dtau
            out_r[m, 0], out_r[m, 1], out_r[m, 2] = x, y, z
            m += 1
    return m, -1


@njit(cache=True)
def _run_between(x, y, z, eps, tau_start, tau_end, dtau):
    n = int(math.floor(abs(tau_end - tau_start) / dtau))
    if abs(tau_end - tau_start) - n * dtau > 1e-9 * dtau:
        n += 1
    sign = 1.0 if tau_end >= tau_start else -1.0
    for k in range(n):
        tau = tau_start + sign * k * dtau
        h = sign * dtau if k < n - 1 else tau_end - tau
        x, y, z = rk4_step(tau, x, y, z, eps, h)
    return x, y, z


def bloch_rhs(tau: float, r: BlochVector, eps: float) -> BlochVector:
    """Time derivative of the Bloch vector under the full (non-RWA) drive."""
    return BlochVector(*_rhs(tau, r.alpha10, r.alpha20, r.alpha30, eps))


def bloch_rhs_cross(tau: float, r: BlochVector, eps: float) -> BlochVector:
    """Same field written as a rotation: ``-eps (x_hat + w_hat(tau)) x r``."""
    axis = np.array([1.0 + math.cos(tau), -math.sin(tau), 0.0])
    return BlochVector.from_array(-eps * np.cross(axis, r.as_array()))


def integrate(r0: BlochVector, eps: float, cfg: IntegrationConfig) -> Trajectory:
    n = cfg.n_steps
    stride = int(cfg.sample_stride)
    cap = n // stride + 2
    out_tau = np.empty(cap)
    out_r = np.empty((cap, 3))
    m, bad = _run_sampled(r0.as_array(), float(eps), float(cfg.dtau), float(cfg.tau_max), n, stride, out_tau, out_r)
    if bad >= 0:
        raise IntegrationError(
            f"non-finite state at step {bad} (tau={bad * cfg.dtau:.6g}, eps={eps})"
        )
    return Trajectory(out_tau[:m].copy(), out_r[:m].copy(), "exact")


def propagate(r0: BlochVector, eps: float, tau_start: float, tau_end: float, dtau: float = 0.001) -> BlochVector:
    """RK4 endpoint from ``tau_start`` to ``tau_end`` (either direction)."""
    x, y, z = _run_between(r0.alpha10, r0.alpha20, r0.alpha30, float(eps), float(tau_start), float(tau_end), float(dtau))
    out = BlochVector(x, y, z)
    if not all(map(math.isfinite, (x, y, z))):
        raise IntegrationError(f"non-finite endpoint integrating to tau={tau_end}")
    return out


def integrate_adaptive_check(r0: BlochVector, eps: float, tau_max: float, tol: float = 1e-9) -> BlochVector:
    """Endpoint from scipy's DOP853 embedded pair at ``rtol = atol = tol``."""
    if not 1e-12 <= tol <= 1e-6:
        raise ValueError(f"tol must lie in [1e-12, 1e-6], got {tol}")
    if tau_max == 0 or eps == 0:
        return r0

    def f(tau, r):
        return _rhs(tau, r[0], r[1], r[2], eps)

    sol = solve_ivp(f, (0.0, tau_max), r0.as_array(), method="DOP853", rtol=tol, atol=tol)
    if not sol.success:
        raise IntegrationError(f"adaptive integration failed: {sol.message}")
    return BlochVector.from_array(sol.y[:, -1])
