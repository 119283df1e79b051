"""Resonant semiclassical Rabi model: exact Bloch dynamics, the RWA, and the
two-term multiple-scales solution with density-operator repair."""

from .core import (
    BlochVector,
    DensityState,
    ModelParams,
    SphericalAngles,
    StateVector3,
    bloch_from_angles,
    bloch_from_density,
    density_from_bloch,
    purity_eigenvalues,
)
from .closed_form import (
    GeometricFrame,
    Trajectory,
    excited_population_ground_start,
    geometric_frame,
    ms2_bloch,
    ms2_density,
    rwa_bloch,
    rwa_density,
    rwa_deviation,
)
from .integrator import IntegrationConfig, bloch_rhs, integrate, integrate_adaptive_check
from .repair import (
    PureDecomposition,
    evolve_mixed,
    evolve_pure_normalized,
    ms_norm_sq,
    normalize_pure,
)
from .sweep import ErrorCurve, SweepConfig, error_curve, point_errors, spline_not_a_knot, theta_phi_mesh

__version__ = "0.1.0"
