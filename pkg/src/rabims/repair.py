"""Turn the two-term approximation back into a valid density operator.

For a pure start the two-term Bloch vector is slightly too long, so it is
radially normalized.  A mixed start is written as a convex combination of
pure states and each branch is evolved and normalized separately.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .closed_form import ms2_density
from .core import BlochVector, DensityState, density_from_bloch

WEIGHT_TOL = 1e-12
PURE_TOL = 1e-10


@dataclass(frozen=True)
class PureDecomposition:
    weights: tuple[float, ...]
    components: tuple[DensityState, ...]

    def __post_init__(self):
        w = tuple(float(a) for a in self.weights)
        comps = tuple(self.components)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "components", comps)
        if not w or len(w) != len(comps):
            raise ValueError("need one weight per component and at least one component")
        if any(a < 0.0 or a > 1.0 for a in w):
            raise ValueError(f"weights must lie in [0, 1], got {w}")
        if abs(math.fsum(w) - 1.0) > WEIGHT_TOL:
            raise ValueError(f"weights must sum to 1, got {math.fsum(w)!r}")
        for d in comps:
            if abs(d.radius - 1.0) > PURE_TOL:
                raise ValueError(f"component {d} is not pure (radius {d.radius})")

    def state(self) -> DensityState:
        rho = sum(a * d.rho12 for a, d in zip(self.weights, self.components))
        alpha = math.fsum(a * d.alpha30 for a, d in zip(self.weights, self.components))
        return DensityState(rho, alpha)

    @classmethod
    def from_eigendecomposition(cls, d: DensityState) -> "PureDecomposition":
        """Split ``d`` along its Bloch direction into two antipodal pure states.

        One decomposition among infinitely many; the evolved result depends on
        the choice.  Weights are the eigenvalues ``(1 +/- |r|)/2``.  The
        maximally mixed state has no preferred axis and is split along z.
        """
        n = d.radius
        if n > 1.0 + WEIGHT_TOL:
            raise ValueError("state is not physical")
        if n == 0.0:
            axis = np.array([0.0, 0.0, 1.0])
        else:
            axis = np.array([2 * d.rho12.real, 2 * d.rho12.imag, d.alpha30]) / n
        n = min(n, 1.0)
        up = density_from_bloch(BlochVector.from_array(axis))
        down = density_from_bloch(BlochVector.from_array(-axis))
        return cls((0.5 * (1 + n), 0.5 * (1 - n)), (up, down))


def normalize_pure(d: DensityState) -> DensityState:
    n = d.radius
    if n == 0.0:
        raise ValueError("cannot normalize a state at the Bloch-sphere origin")
    return DensityState(d.rho12 / n, d.alpha30 / n)


def evolve_pure_normalized(d0: DensityState, eps: float, tau: float) -> DensityState:
    if abs(d0.radius - 1.0) > PURE_TOL:
        raise ValueError(f"initial state is not pure (radius {d0.radius})")
    return normalize_pure(ms2_density(d0, eps, tau))


def evolve_mixed(dec: PureDecomposition, eps: float, tau: float) -> DensityState:
    if not isinstance(dec, PureDecomposition):
        raise TypeError("expected a PureDecomposition")
    rho = 0j
    parts = []
    for a, d in zip(dec.weights, dec.components):
        p = evolve_pure_normalized(d, eps, tau)
        rho += a * p.rho12
        parts.append(a * p.alpha30)
    return DensityState(rho, math.fsum(parts))


def norm_growth_terms(d0: DensityState, eps: float, tau: float) -> tuple[complex, complex]:
    """The two complex amplitudes whose squared moduli, times eps**2, give
    the excess squared length of the two-term Bloch vector."""
    s = eps * tau
    re, im, a3 = d0.rho12.real, d0.rho12.imag, d0.alpha30
    ss, cs = math.sin(s), math.cos(s)
    st, ct = math.sin(tau), math.cos(tau)
    e = complex(ct, -st)
    c2 = math.cos(0.5 * s) ** 2
    e1 = ss * (2 * e - 1) * im - 1j * ss * re + a3 * (c2 - e * cs)
    e2 = 2 * (c2 - ct) * re + ss * st * a3 + 2 * cs * st * im
    return e1, complex(e2)


def ms_norm_sq(d0: DensityState, eps: float, tau: float) -> float:
    """Squared length of the two-term Bloch vector via the growth terms."""
    e1, e2 = norm_growth_terms(d0, eps, tau)
    return d0.radius**2 + eps**2 * (abs(e1) ** 2 + abs(e2) ** 2)


def ms_eigenvalues(d0: DensityState, eps: float, tau: float) -> tuple[float, float]:
    """Eigenvalues of the raw two-term density matrix from the growth terms."""
    p_plus = 0.5 * (1.0 + math.sqrt(ms_norm_sq(d0, eps, tau)))
    return p_plus, 1.0 - p_plus
