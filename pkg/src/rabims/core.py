"""Two-level state representations and the conversions between them.

All quantities are nondimensional: time is ``tau = 2*omega1*t`` and the
coupling enters only through ``eps = Omega0 / (2*omega1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# absolute tolerance for "pure" / "physical" classification
PHYSICAL_TOL = 1e-12


@dataclass(frozen=True)
class BlochVector:
    alpha10: float
    alpha20: float
    alpha30: float

    @property
    def norm(self) -> float:
        return math.sqrt(self.alpha10**2 + self.alpha20**2 + self.alpha30**2)

    def is_physical(self, tol: float = PHYSICAL_TOL) -> bool:
        return self.norm <= 1.0 + tol

    def is_pure(self, tol: float = PHYSICAL_TOL) -> bool:
        return abs(self.norm - 1.0) <= tol

    def as_array(self) -> np.ndarray:
        return np.array([self.alpha10, self.alpha20, self.alpha30], dtype=float)

    @classmethod
    def from_array(cls, v) -> "BlochVector":
        return cls(float(v[0]), float(v[1]), float(v[2]))


@dataclass(frozen=True)
class DensityState:
    """A 2x2 unit-trace Hermitian matrix, stored as (rho12, alpha30).

    ``alpha30 = rho22 - rho11``; the diagonal is ``(1 -/+ alpha30)/2``.
    """

    rho12: complex
    alpha30: float

    def __post_init__(self):
        object.__setattr__(self, "rho12", complex(self.rho12))
        a = self.alpha30
        if isinstance(a, complex):
            if a.imag != 0.0:
                raise ValueError(f"alpha30 must be real, got {a!r}")
            a = a.real
        object.__setattr__(self, "alpha30", float(a))

    @property
    def rho21(self) -> complex:
        return self.rho12.conjugate()

    @property
    def rho22(self) -> float:
        return 0.5 * (1.0 + self.alpha30)

    @property
    def rho11(self) -> float:
        return 0.5 * (1.0 - self.alpha30)

    @property
    def radius(self) -> float:
        """Bloch length ``sqrt(alpha30**2 + 4|rho12|**2)``."""
        return math.sqrt(self.alpha30**2 + 4.0 * abs(self.rho12) ** 2)

    def is_physical(self, tol: float = PHYSICAL_TOL) -> bool:
        return self.radius <= 1.0 + tol

    def is_pure(self, tol: float = PHYSICAL_TOL) -> bool:
        return abs(self.radius - 1.0) <= tol

    def matrix(self) -> np.ndarray:
        return np.array(
            [[self.rho11, self.rho12], [self.rho21, self.rho22]], dtype=complex
        )


@dataclass(frozen=True)
class ModelParams:
    """Perturbation parameter, optionally with the dimensional frequencies
    it came from (both in rad/s)."""

    epsilon: float
    omega1: float | None = None
    Omega0: float | None = None

    def __post_init__(self):
        if not self.epsilon > 0.0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if (self.omega1 is None) != (self.Omega0 is None):
            raise ValueError("omega1 and Omega0 must be given together")
        if self.omega1 is not None:
            if self.omega1 <= 0 or self.Omega0 <= 0:
                raise ValueError("frequencies must be positive")
            ratio = self.Omega0 / (2.0 * self.omega1)
            if abs(ratio - self.epsilon) > 1e-15 * abs(ratio):
                raise ValueError("epsilon != Omega0 / (2 omega1)")

    @classmethod
    def from_frequencies(cls, omega1: float, Omega0: float) -> "ModelParams":
        if omega1 <= 0 or Omega0 <= 0:
            raise ValueError("frequencies must be positive")
        return cls(Omega0 / (2.0 * omega1), omega1, Omega0)

    def tau(self, t: float) -> float:
        """Nondimensional time for a physical time ``t`` in seconds."""
        if self.omega1 is None:
            raise ValueError("no dimensional frequencies attached")
        return 2.0 * self.omega1 * t

    @property
    def rabi_period_tau(self) -> float:
        return 2.0 * math.pi / self.epsilon


@dataclass(frozen=True)
class SphericalAngles:
    theta: float
    phi: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"theta={self.theta} outside [0, pi]")
        if not 0.0 <= self.phi < 2.0 * math.pi:
            raise ValueError(f"phi={self.phi} outside [0, 2pi)")


@dataclass(frozen=True)
class StateVector3:
    """The complex column ``(rho12, rho21, alpha30)`` used by the matrix form."""

    x1: complex
    x2: complex
    x3: complex

    def as_array(self) -> np.ndarray:
        return np.array([self.x1, self.x2, self.x3], dtype=complex)

    @classmethod
    def from_array(cls, v) -> "StateVector3":
        return cls(complex(v[0]), complex(v[1]), complex(v[2]))

    @classmethod
    def from_density(cls, d: DensityState) -> "StateVector3":
        return cls(d.rho12, d.rho12.conjugate(), complex(d.alpha30))

    def to_density(self, tol: float = PHYSICAL_TOL) -> DensityState:
        if abs(self.x3.imag) > tol or abs(self.x2 - self.x1.conjugate()) > tol:
            raise ValueError("vector does not represent a Hermitian matrix")
        return DensityState(self.x1, self.x3.real)


def bloch_from_density(d: DensityState) -> BlochVector:
    return BlochVector(2.0 * d.rho12.real, 2.0 * d.rho12.imag, d.alpha30)


def density_from_bloch(r: BlochVector) -> DensityState:
    return DensityState(complex(0.5 * r.alpha10, 0.5 * r.alpha20), r.alpha30)


def bloch_from_angles(a: SphericalAngles) -> BlochVector:
    s = math.sin(a.theta)
    return BlochVector(s * math.cos(a.phi), s * math.sin(a.phi), math.cos(a.theta))


def purity_eigenvalues(d: DensityState) -> tuple[float, float]:
    """Eigenvalues ``(p_plus, p_minus)`` of the density matrix."""
    n = d.radius
    p_plus = 0.5 * (1.0 + n)
    return p_plus, 1.0 - p_plus
