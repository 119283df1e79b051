"""Closed-form evaluation of the RWA and two-term multiple-scales solutions.

Trig arguments are always formed directly as ``eps*tau`` and ``tau`` so that
long horizons (thousands of fast periods) carry no accumulated phase error.
The scalar kernels are numba-compiled; the sweep calls them from its own
compiled loop.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .core import BlochVector, DensityState, bloch_from_density

SINGULAR_AXIS_TOL = 1e-12


@dataclass(frozen=True)
class Trajectory:
    """Sampled solution: ``points[i]`` is the Bloch vector at ``taus[i]``."""

    taus: np.ndarray
    points: np.ndarray  # shape (n, 3)
    label: str

    def __post_init__(self):
        taus = np.asarray(self.taus, dtype=float)
        pts = np.asarray(self.points, dtype=float).reshape(-1, 3)
        if len(taus) != len(pts):
            raise ValueError("taus and points differ in length")
        if len(taus) > 1 and not np.all(np.diff(taus) > 0):
            raise ValueError("taus must be strictly increasing")
        object.__setattr__(self, "taus", taus)
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return len(self.taus)

    def bloch(self, i: int) -> BlochVector:
        return BlochVector.from_array(self.points[i])


@dataclass(frozen=True)
class GeometricFrame:
    """Helper vectors of the nutation/precession picture at one instant.

    ``Q_hat`` is the instantaneous rotation axis and ``q`` the (nonpositive)
    angular velocity about it.  When ``x_hat + w_hat`` vanishes
    (``tau = pi mod 2pi``) the axis is undefined: ``singular_axis`` is True,
    ``Q_hat`` is None and ``q`` is 0.
    """

    w_hat: np.ndarray
    w2_hat: np.ndarray
    w3: np.ndarray
    Q_hat: np.ndarray | None
    q: float
    singular_axis: bool = field(default=False)


# ---------------------------------------------------------------- kernels


@njit(cache=True)
def rwa_rotate(a1, a2, a3, cs, ss):
    """Rotate about x by the slow phase, given its cosine and sine."""
    return a1, cs * a2 + ss * a3, -ss * a2 + cs * a3


@njit(cache=True)
def nutate(x, y, z, eps, ct, st, ch, sh):
    """Apply the first-order correction ``r - eps * w3 x r`` to an RWA vector.

    ``ct, st`` are cos/sin of the fast phase, ``ch, sh`` of half the slow one.
    """
    wx, wy, wz = st, ct - ch * ch, ch * sh
    cx = wy * z - wz * y
    cy = wz * x - wx * z
    cz = wx * y - wy * x
    return x - eps * cx, y - eps * cy, z - eps * cz


@njit(cache=True)
def rwa_xyz(a1, a2, a3, eps, tau):
    s = eps * tau
    return rwa_rotate(a1, a2, a3, math.cos(s), math.sin(s))


@njit(cache=True)
def w3_xyz(eps, tau):
    h = 0.5 * eps * tau
    ch = math.cos(h)
    return math.sin(tau), math.cos(tau) - ch * ch, ch * math.sin(h)


@njit(cache=True)
def ms2_xyz(a1, a2, a3, eps, tau):
    """Two-term Bloch vector as ``r_rwa - eps * w3 x r_rwa``."""
    s = eps * tau
    x, y, z = rwa_rotate(a1, a2, a3, math.cos(s), math.sin(s))
    return nutate(x, y, z, eps, math.cos(tau), math.sin(tau), math.cos(0.5 * s), math.sin(0.5 * s))


# ---------------------------------------------------------------- public ops


def rwa_bloch(r0: BlochVector, eps: float, tau: float) -> BlochVector:
    return BlochVector(*rwa_xyz(r0.alpha10, r0.alpha20, r0.alpha30, eps, tau))


def rwa_density(d0: DensityState, eps: float, tau: float) -> DensityState:
    s = eps * tau
    rho, a3 = d0.rho12, d0.alpha30
    c2 = math.cos(0.5 * s) ** 2
    s2 = math.sin(0.5 * s) ** 2
    rho12 = rho * c2 + rho.conjugate() * s2 + 0.5j * a3 * math.sin(s)
    # i*rho*sin - i*conj(rho)*sin = -2*Im(rho)*sin, real by construction
    alpha30 = -2.0 * rho.imag * math.sin(s) + a3 * math.cos(s)
    return DensityState(rho12, alpha30)


def ms2_density(d0: DensityState, eps: float, tau: float) -> DensityState:
    """Two-term multiple-scales density state at time ``tau``.

    With all terms proportional to ``eps`` dropped this is exactly
    :func:`rwa_density`.  ``alpha30`` is assembled from explicitly real
    combinations, so its imaginary part is identically zero.
    """
    s = eps * tau
    rho, a3 = d0.rho12, d0.alpha30
    rc = rho.conjugate()
    c2 = math.cos(0.5 * s) ** 2
    s2 = math.sin(0.5 * s) ** 2
    ss, cs = math.sin(s), math.cos(s)
    st, ct = math.sin(tau), math.cos(tau)
    e = complex(ct, -st)  # exp(-i tau)
    rho12 = (
        rho * (c2 - 0.5j * eps * e * ss)
        + rc * (s2 - 0.5j * eps * ss * (1.0 - e))
        + a3 * (0.5j * ss + 0.5 * eps * (c2 - e * cs))
    )
    re, im = rho.real, rho.imag
    alpha30 = a3 * cs - 2.0 * im * ss - eps * (
        re * (1.0 - 2.0 * ct + cs) + 2.0 * im * cs * st + a3 * ss * st
    )
    return DensityState(rho12, alpha30)


def ms2_bloch(r0: BlochVector, eps: float, tau: float) -> BlochVector:
    return BlochVector(*ms2_xyz(r0.alpha10, r0.alpha20, r0.alpha30, eps, tau))


def geometric_frame(eps: float, tau: float) -> GeometricFrame:
    h = 0.5 * eps * tau
    w_hat = np.array([math.cos(tau), -math.sin(tau), 0.0])
    w2_hat = np.array([0.0, math.sin(h), math.cos(h)])
    w3 = np.array(w3_xyz(eps, tau))
    axis = np.array([1.0, 0.0, 0.0]) + w_hat
    size = float(np.linalg.norm(axis))
    if size < SINGULAR_AXIS_TOL:
        return GeometricFrame(w_hat, w2_hat, w3, None, 0.0, singular_axis=True)
    return GeometricFrame(w_hat, w2_hat, w3, axis / size, -eps * size)


def rwa_deviation(d0: DensityState, eps: float, tau):
    """``(|rho12 - rho12_rwa|, |alpha30 - alpha30_rwa|)`` from the explicit
    eps-proportional difference terms.  Bounded by ``2 eps`` and ``4 eps``
    for any physical ``d0``.  ``tau`` may be an array."""
    tau = np.asarray(tau, dtype=float)
    s = eps * tau
    rho, a3 = d0.rho12, d0.alpha30
    ss, cs = np.sin(s), np.cos(s)
    st, ct = np.sin(tau), np.cos(tau)
    e = np.exp(-1j * tau)
    d_rho = (
        a3 * 0.5 * eps * (np.cos(0.5 * s) ** 2 - e * cs)
        + rho * (-0.5j * eps * e * ss)
        + rho.conjugate() * (-0.5j * eps * ss * (1.0 - e))
    )
    d_alpha = (
        -a3 * eps * ss * st
        - rho * 0.5 * eps * (1.0 - 2.0 * ct + cs * (1.0 - 2.0j * st))
        - rho.conjugate() * 0.5 * eps * (1.0 - 2.0 * ct + cs * (1.0 + 2.0j * st))
    )
    if tau.ndim == 0:
        return float(abs(d_rho)), float(abs(d_alpha))
    return np.abs(d_rho), np.abs(d_alpha)


def excited_population_ground_start(eps: float, tau: float) -> float:
    """Two-term excited-state population for a qubit starting in ``|1>``.

    The truncated series can leave [0, 1] by O(eps); the raw value is
    returned and a ``RuntimeWarning`` reports the excursion.
    """
    s = eps * tau
    p = math.sin(0.5 * s) ** 2 + 0.5 * eps * math.sin(s) * math.sin(tau)
    if not 0.0 <= p <= 1.0:
        warnings.warn(
            f"two-term population {p:.3e} outside [0, 1] at eps={eps}, tau={tau}",
            RuntimeWarning,
            stacklevel=2,
        )
    return p


def ms2_bloch_from_density(d0: DensityState, eps: float, tau: float) -> BlochVector:
    return bloch_from_density(ms2_density(d0, eps, tau))
