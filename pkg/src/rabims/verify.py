"""Cross-module consistency checks run by ``rabims verify``."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import ms_matrices as mm
from .closed_form import excited_population_ground_start, ms2_bloch, ms2_density, rwa_density, rwa_deviation
from .core import BlochVector, DensityState, StateVector3, density_from_bloch
from .integrator import IntegrationConfig, bloch_rhs, bloch_rhs_cross, integrate
from .repair import ms_norm_sq


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.value <= self.tolerance)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{self.name:<44} {self.value:10.3e} <= {self.tolerance:8.1e}  {status}"


def _random_pure(rng, n):
    v = rng.normal(size=(n, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def _random_ball(rng, n):
    return _random_pure(rng, n) * rng.uniform(0, 1, size=(n, 1)) ** (1 / 3)


def run_checks(seed: int = 0, tolerance_scale: float = 1.0) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    results = []

    def add(name, value, tol):
        results.append(CheckResult(name, float(value), tol * tolerance_scale))

    vecs = _random_ball(rng, 200)
    eps = rng.uniform(0.02, 0.25, 200)
    taus = rng.uniform(0, 1, 200) * 2 * math.pi / eps

    worst_ms = worst_rwa = worst_norm = 0.0
    for v, e, t in zip(vecs, eps, taus):
        d0 = density_from_bloch(BlochVector(*v))
        x0 = StateVector3.from_density(d0)
        x = mm.x1_matrix_form(x0, e, t)
        d = ms2_density(d0, e, t)
        worst_ms = max(worst_ms, abs(x.x1 - d.rho12), abs(x.x3 - d.alpha30))
        x = mm.rwa_matrix_form(x0, e, t)
        d = rwa_density(d0, e, t)
        worst_rwa = max(worst_rwa, abs(x.x1 - d.rho12), abs(x.x3 - d.alpha30))
        worst_norm = max(worst_norm, abs(ms_norm_sq(d0, e, t) - ms2_bloch(BlochVector(*v), e, t).norm ** 2))
    add("matrix form vs closed form (two-term)", worst_ms, 1e-10)
    add("matrix form vs closed form (RWA)", worst_rwa, 1e-12)
    add("norm-growth identity", worst_norm, 1e-10)

    r1 = r2 = 0.0
    for v, t2 in zip(vecs[:100], rng.uniform(0, 2 * math.pi, 100)):
        x0 = StateVector3.from_density(density_from_bloch(BlochVector(*v)))
        r1 = max(r1, mm.secular_residual_O1(x0, t2))
        r2 = max(r2, mm.secular_residual_O2(x0, t2))
    add("secular residual, first order", r1, 1e-8)
    add("secular residual, second order", r2, 1e-8)

    ratio = 0.0
    grid = np.linspace(0, 1, 200)
    for v in _random_pure(rng, 100):
        d0 = density_from_bloch(BlochVector(*v))
        for e in (0.05, 0.1, 0.25):
            for t in grid * 2 * math.pi / e:
                dr, da = rwa_deviation(d0, e, t)
                ratio = max(ratio, dr / (2 * e), da / (4 * e))
    add("RWA deviation / bound (must be <= 1)", ratio, 1.0)

    drift = 0.0
    for v in _random_pure(rng, 3):
        e = 0.1
        tr = integrate(BlochVector(*v), e, IntegrationConfig(2 * math.pi / e, 0.001, 50))
        drift = max(drift, float(np.max(np.abs(np.linalg.norm(tr.points, axis=1) - 1.0))))
    add("RK4 norm drift over one Rabi oscillation", drift, 1e-9)

    rhs = 0.0
    for v, t in zip(rng.normal(size=(200, 3)), rng.uniform(0, 100, 200)):
        r = BlochVector(*v)
        a = bloch_rhs(t, r, 0.2).as_array()
        b = bloch_rhs_cross(t, r, 0.2).as_array()
        rhs = max(rhs, float(np.max(np.abs(a - b))))
    add("Bloch RHS vs cross-product form", rhs, 1e-15)

    prob = 0.0
    ground = DensityState(0, -1)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        for e, t in zip(eps, taus):
            p = excited_population_ground_start(e, t)
            prob = max(prob, abs(p - 0.5 * (1 + ms2_density(ground, e, t).alpha30)))
    add("excited population vs two-term alpha30", prob, 1e-14)
    return results


def report(results: list[CheckResult]) -> str:
    lines = [r.line() for r in results]
    n_fail = sum(not r.passed for r in results)
    lines.append(f"{len(results) - n_fail}/{len(results)} checks passed")
    return "\n".join(lines) + "\n"
